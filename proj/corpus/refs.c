#include <crusted.h>

typedef int T;

typedef struct Node_t {
  T elem;
  struct Node_t * e_opt_hown nextp;
} Node_t;

// Shared reference.
void node_print(const Node_t *nodep);
// Exclusive reference.
bool node_insert_after(Node_t *nodep, T elem);
// Owning reference.
Node_t * e_opt_hown node_ctor(T elem);
