#include "qmi/eocalc.hpp"
