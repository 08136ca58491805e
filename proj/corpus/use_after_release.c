#include <stdlib.h>
#include <crusted.h>

int reuse(void) {
  int *p = malloc(4);
  if (p == NULL)
    return -1;
  *p = 1;
  free(p);
  return *p;
}
