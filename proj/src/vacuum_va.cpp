#include "qmi/vacuum_va.hpp"
