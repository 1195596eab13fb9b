#include <cstdio>

int main(int, char**) {
  int failures = 0;
  for (int i = 1; i <= 8; ++i) {
    std::printf("criterion %d: FAIL (not yet implemented)\n", i);
    ++failures;
  }
  return failures == 0 ? 0 : 1;
}
