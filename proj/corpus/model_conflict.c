#include <stdlib.h>
#include <crusted.h>

void * e_opt(NULL)
malloc(size_t size);
