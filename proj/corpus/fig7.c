#include <crusted.h>

typedef struct { /* ... */ } e_fini Channel_t;

void channel_ctor(Channel_t * e_init chanp);
bool channel_send(Channel_t *chanp, const char *msg);
void channel_dtor(Channel_t * e_fini chanp);

int baz(void) {
  Channel_t c;
  channel_send(&c, "..."); // Use of uninitialized resource.
  channel_ctor(&c);
  if (!channel_send(&c, "Message"))
    return -1;             // Missing finalization.
  channel_dtor(&c);
  return 0;
}
