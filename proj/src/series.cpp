#include "qmi/series.hpp"
