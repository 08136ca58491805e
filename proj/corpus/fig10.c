#include <errno.h>
#include <stdlib.h>
#include <crusted.h>

typedef struct file_rep { unsigned flags; } FILE;
e_declprops(FILE, e_unsafe("FILE"));

typedef FILE * fp_t;
typedef fp_t e_own fp_own_t;
typedef fp_own_t e_opt(NULL) fp_opt_own_t;

int e_val(e_eq(0) || e_eq(EOF))
fclose(fp_own_t fp) {
  // ...

  e_checked("FILE") {
    if (fp->flags == 0U) {
      errno = EBADF;
      return EOF;
    }
  }

  return 0;
}
