#include <crusted.h>

void fill(int * e_excl dst);
