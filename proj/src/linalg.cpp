#include "ipl/linalg.hpp"
