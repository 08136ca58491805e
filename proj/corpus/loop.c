#include <crusted.h>

long sum_upto(int n) {
  long total = 0;
  int i = 0;
  while (i < n) {
    total = total + i;
    i = i + 1;
  }
  return total;
}
