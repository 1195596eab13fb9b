#include "qmi/operator_field.hpp"
