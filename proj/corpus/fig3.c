#include <fcntl.h>
#include <unistd.h>
#include <stdlib.h>
#include <crusted.h> // Include C-rusted declarations, e.g., for e_hown().

// The actual parameter must be a valid (hence, non-null) pointer
// to a char array in the heap of which process() will take ownership:
// the caller must have ownership for otherwise it would be unable to pass it on.
extern void process(char * e_hown string);

int foo(const char *fname, unsigned bufsize) {
  int fd; // (The value of) `fd` is indeterminate.
  fd = open(fname, O_RDONLY);
  // `fd` is either the erroneous value -1 or an owning reference to an open file description.
  if (fd == -1)
    return 1;
  // `fd` is definitely an owning reference to an open file description.

  char *buf = (char *) malloc(bufsize);
  // `buf` is either NULL or an owning reference to a heap-allocated char array.
  if (buf == NULL || bufsize == 0U) {
    (void) close(fd);
    // Ownership of the open file description moved from the actual parameter
    // to the formal parameter of close(), which will close it:
    // no open file description leak; `fd` cannot be used anymore but it can be overwritten.
    return 1;
  }
  // `buf` is definitely an owning reference to a heap-allocated char array.

  ssize_t bytes = read(fd, buf, bufsize - 1U); // No ownership move, resources are borrowed.
  // `bytes` is either the erroneous value -1 or the number of bytes read into `buf`.
  if (bytes == -1) {
    free(buf);
    // Ownership of the heap-allocated memory moved from the actual parameter
    // to the formal parameter of free(), which will deallocate it:
    // no memory leak, `buf` cannot be used anymore but it can be overwritten.
    (void) close(fd); // Ownership moved from actual to formal parameter, as in line 22.
    return 1;
  }
  // `bytes` is definitely the number of bytes read into `buf`.
  buf[bytes] = '\0';

  process(buf);
  // Ownership of the heap-allocated memory moved from the actual parameter
  // to the formal parameter of process(), which will deallocate it:
  // no memory leak, `buf` cannot be used anymore but it can be overwritten.

  if (close(fd) != 0) // Ownership moved from actual to formal parameter, as in line 22.
    return 1;

  return 0;
}
