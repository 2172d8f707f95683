#include <cstdio>

int main() {
    std::puts("sodac: not wired up yet");
    return 0;
}
