#include <crusted.h>

typedef int e_type e_val(e_geq(0)) count_t;

int tally(void) {
  count_t n = -1;
  return 0;
}
