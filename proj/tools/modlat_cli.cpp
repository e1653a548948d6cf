#include "modlat/common.hpp"
int main() { modlat::init_precision_from_env(); return 0; }
