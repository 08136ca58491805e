#include <crusted.h>

typedef struct file_rep { unsigned flags; } FILE;
e_declprops(FILE, e_unsafe("FILE"));

unsigned read_flags(FILE *fp) {
  unsigned out = 0;
  e_checked("FILE") {
    out = fp->flags;
  }
  return out;
}
