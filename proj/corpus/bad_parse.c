#include <crusted.h>

int broken(void) {
  return 1 +;
}
