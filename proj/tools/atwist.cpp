#include <cstdio>
int main() { std::puts("atwist"); return 0; }
