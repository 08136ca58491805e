#include <crusted.h>

typedef double e_type celsius_t;
typedef double e_type kelvin_t;

celsius_t to_celsius(kelvin_t k) {
  celsius_t c = k;
  return c;
}
