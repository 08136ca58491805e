#include <crusted.h>

int shuffle(void) {
  int x = 1;
  int *ex = &x;
  x = 2;
  return *ex;
}

int peek(void) {
  int y = 3;
  const int *sh = &y;
  y = 4;
  return *sh;
}

void stamp(const int *ro) {
  *ro = 5;
}
