#include <cstdio>

int main() {
  std::puts("gkpkit: command-line interface under construction");
  return 0;
}
