#include "qmi/lie_algebra.hpp"
