#include <stdlib.h>
#include <crusted.h>

int first(void) {
  int *p = malloc(4);
  if (p == NULL)
    return -1;
  int v = *p;
  free(p);
  return v;
}
