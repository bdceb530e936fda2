"""CMake bridge: builds the pybind11 extension with the project's CMake and
places it inside the `blicket` package."""

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
        source_dir = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        subprocess.run(
            [
                "cmake",
                str(source_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DBLICKET_BUILD_TESTS=OFF",
                "-DBLICKET_BUILD_CLI=OFF",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "blicket_py", "--parallel"],
            cwd=build_dir,
            check=True,
        )

        artifacts = sorted((build_dir / "python" / "blicket").glob("_blicket*"))
        if not artifacts:
            raise RuntimeError("cmake build produced no _blicket extension")
        dest = Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_bytes(artifacts[0].read_bytes())


setup(
    packages=["blicket"],
    package_dir={"": "python"},
    ext_modules=[CMakeExtension("blicket._blicket")],
    cmdclass={"build_ext": CMakeBuild},
)
