// placeholder; full CLI arrives with the presets module
#include <cstdio>

int main() {
    std::puts("ptbec: not wired up yet");
    return 2;
}
