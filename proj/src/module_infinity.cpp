#include "qmi/module_infinity.hpp"
