#include <fcntl.h>
#include <unistd.h>
#include <stdlib.h>

extern void process(char *string);

int foo(const char *fname, size_t bufsize) {
  int fd = open(fname, O_RDONLY);
  char *buf = (char *) malloc(bufsize);
  ++fd;
  ssize_t bytes = read(fd, buf, bufsize - 1U);
  buf[bytes] = '\0';
  process(buf);
  return 0;
}
