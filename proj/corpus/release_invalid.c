#include <stdlib.h>
#include <crusted.h>

void trim(int *view) {
  free(view);
}
