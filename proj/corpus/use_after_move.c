#include <stdlib.h>
#include <crusted.h>

void give(void * e_hown blob);

int hand_off(void) {
  void *p = malloc(8);
  if (p == NULL)
    return -1;
  give(p);
  give(p);
  return 0;
}
