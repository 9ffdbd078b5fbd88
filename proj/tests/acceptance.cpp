#include <cstdio>
int main(int, char**){ std::puts("acceptance: placeholder"); return 1; }
