# SPDX-License-Identifier: Apache-2.0
"""Build the cherrymetrics extension by driving the top-level CMake project."""

import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)
        out_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        out_path.parent.mkdir(parents=True, exist_ok=True)
        config = "Debug" if self.debug else "Release"
        pybind11_dir = subprocess.run(
            [sys.executable, "-m", "pybind11", "--cmakedir"],
            capture_output=True, text=True, check=True,
        ).stdout.strip()
        subprocess.run(
            [
                "cmake",
                str(source_dir),
                f"-Dpybind11_DIR={pybind11_dir}",
                f"-DCMAKE_BUILD_TYPE={config}",
                "-DCHERRYMETRICS_BUILD_PYTHON=ON",
                "-DCHERRYMETRICS_BUILD_TESTS=OFF",
                f"-DPYTHON_EXECUTABLE={sys.executable}",
                f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={out_path.parent}",
                "-DCMAKE_POSITION_INDEPENDENT_CODE=ON",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_core", "-j"],
            cwd=build_dir,
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("cherrymetrics._core")],
    cmdclass={"build_ext": CMakeBuild},
)
