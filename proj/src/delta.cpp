#include "qmi/delta.hpp"
