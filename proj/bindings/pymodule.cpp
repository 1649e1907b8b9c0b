#include <pybind11/pybind11.h>
PYBIND11_MODULE(_admo, m) { m.doc() = "placeholder"; }
