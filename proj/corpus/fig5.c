#include <crusted.h>

typedef int e_type e_val(e_geq(0)) fd_t;
typedef fd_t e_own fd_own_t;
typedef fd_own_t e_opt(-1) fd_opt_own_t;

fd_opt_own_t
open(const char *path, int oflag);

int e_val(e_range(-1, 0))
close(fd_own_t fildes);
