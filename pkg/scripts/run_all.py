"""Run every figure script; outputs land under $ECHOMEM_OUT (default ./out)."""

import runpy
import sys
import time
from pathlib import Path

HERE = Path(__file__).resolve().parent
SCRIPTS = ["crib_spectral_maps.py", "echo_broadening.py", "area_maps.py", "afc_dispersion.py"]

if __name__ == "__main__":
    sys.path.insert(0, str(HERE))
    for name in SCRIPTS:
        print(f"== {name}")
        t0 = time.perf_counter()
        runpy.run_path(str(HERE / name), run_name="__main__")
        print(f"   {time.perf_counter() - t0:.1f} s")
