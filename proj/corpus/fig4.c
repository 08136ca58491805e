#include <stdlib.h>
#include <crusted.h>

void * e_opt_hown e_uninit
malloc(size_t size);

void * e_opt_hown
calloc(size_t nmemb, size_t size);

void
free(void * e_opt_hown e_release ptr);
