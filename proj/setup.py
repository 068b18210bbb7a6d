import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup


def eigen_include():
    for candidate in (os.environ.get("EIGEN3_INCLUDE_DIR"), "/usr/include/eigen3",
                      "/usr/local/include/eigen3"):
        if candidate and os.path.isdir(candidate):
            return candidate
    raise RuntimeError("Eigen3 headers not found; set EIGEN3_INCLUDE_DIR")


ext = Pybind11Extension(
    "minresmon._core",
    sources=[
        "bindings/module.cpp",
        "src/partition.cpp",
        "src/operators.cpp",
        "src/preconditioner.cpp",
        "src/solver.cpp",
        "src/verify.cpp",
        "src/problems.cpp",
        "src/io.cpp",
    ],
    include_dirs=["include", eigen_include()],
    cxx_std=20,
)

setup(
    ext_modules=[ext],
    cmdclass={"build_ext": build_ext},
)
