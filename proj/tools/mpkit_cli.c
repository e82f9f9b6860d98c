#include <stdio.h>

#include "mpkit.h"

int main(int argc, char **argv) {
  char *output = NULL;
  int code = mpkit_run(argc - 1, (const char *const *)(argv + 1), &output);
  if (output) {
    fputs(output, code == 0 ? stdout : (code == 2 ? stderr : stdout));
    mpkit_free(output);
  }
  return code;
}
