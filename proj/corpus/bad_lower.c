#include <crusted.h>

int clobber(void) {
  int x = 0;
  x + 1 = 3;
  return x;
}
