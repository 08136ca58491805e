#include <stdlib.h>
#include <crusted.h>

int *grab(size_t n) {
  int *p = malloc(n);
  return p;
}
