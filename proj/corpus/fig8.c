#include <crusted.h>

typedef struct Mixer Mixer_t;

void mixer_open(Mixer_t * e_in(blade=off) e_out(door=opened) mxp);
void mixer_close(Mixer_t * e_out(door=closed) mxp);
void mixer_on(Mixer_t * e_in(door=closed) e_out(blade=on) mxp);
void mixer_off(Mixer_t * e_out(blade=off) mxp);

void qux(Mixer_t * e_in(blade=off) e_out(door=?) mxp) {
  mixer_on(mxp);   // Door may be open!
  mixer_close(mxp);
                    // Door closed.
  mixer_on(mxp);
                    // Blade on.
  return;           // Blade still on!
}
