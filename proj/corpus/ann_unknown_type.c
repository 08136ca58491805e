#include <crusted.h>

e_declprops(Widget, e_unsafe("widget"));
