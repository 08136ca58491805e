#include <crusted.h>

typedef int e_type e_val(e_gtr(0)) speed_t;
