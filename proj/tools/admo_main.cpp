#include "admo/io.hpp"
int main() { return 0; }
