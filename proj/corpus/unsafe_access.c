#include <crusted.h>

typedef struct file_rep { unsigned flags; } FILE;
e_declprops(FILE, e_unsafe("FILE"));

unsigned probe_flags(FILE *fp) {
  return fp->flags;
}
