#include <crusted.h>

int pick(void) {
  return 1;
  return 2;
}
