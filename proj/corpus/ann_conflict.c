#include <crusted.h>

typedef int e_own fd_own_t;

void take(fd_own_t e_own fd);
