#include <crusted.h>

typedef double e_type e_val(e_geq(-273.15)) celsius_t;    // Celsius.
typedef double e_type e_val(e_geq(0))       kelvin_t;     // Kelvin.
typedef double e_type                       dltcelsius_t; // Delta Celsius.
typedef double e_type                       dltkelvin_t;  // Delta Kelvin.

e_bop(dltcelsius_t, celsius_t, -, celsius_t); // Delta C = C - C.
e_bop(dltkelvin_t, kelvin_t, -, kelvin_t);    // Delta K = K - K.
e_bop(double, kelvin_t, /, kelvin_t);

void bar(celsius_t c1, celsius_t c2, kelvin_t k1, kelvin_t k2) {
  dltcelsius_t dltc = c1 - c2;
  double c_ratio = c1 / c2; // Operation not allowed.
  double k_ratio = k1 / k2;
  // ...
}
