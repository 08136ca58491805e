#include <mystery.h>

int identity(int v) {
  return v;
}
