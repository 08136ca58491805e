#include <stdio.h>
#include <crusted.h>

e_declprops(FILE, e_unsafe("FILE"));
typedef FILE * fp_t;
typedef fp_t e_own fp_own_t;
typedef fp_own_t e_opt(NULL) fp_opt_own_t;

fp_opt_own_t
fopen(const char * restrict filename,
      const char * restrict mode);

int e_val(e_eq(0) || e_eq(EOF))
fclose(fp_own_t fp);
