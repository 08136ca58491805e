#include <crusted.h>

typedef struct file_rep { unsigned flags; } FILE;
e_declprops(FILE, e_unsafe("FILE"));

unsigned e_unsafe("FILE") grab_flags(FILE *fp) {
  unsigned out = 0;
  e_unchecked("FILE") {
    out = fp->flags;
  }
  return out;
}
