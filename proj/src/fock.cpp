#include "qmi/fock.hpp"
