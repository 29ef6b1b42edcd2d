#!/usr/bin/env python3
"""Regenerate core/src/sobol_directions.inc from the Joe-Kuo (new-joe-kuo-6.21201)
direction numbers that ship with scipy.

Usage: python3 tools/gen_sobol_directions.py [max_dims] > core/src/sobol_directions.inc
"""
import os
import sys

import numpy as np
import scipy


def main():
    max_dims = int(sys.argv[1]) if len(sys.argv) > 1 else 1024
    path = os.path.join(os.path.dirname(scipy.__file__), "stats",
                        "_sobol_direction_numbers.npz")
    data = np.load(path)
    poly, vinit = data["poly"][:max_dims], data["vinit"][:max_dims]

    out = sys.stdout
    out.write("// Generated by tools/gen_sobol_directions.py. Do not edit.\n")
    out.write("// Joe-Kuo new-joe-kuo-6.21201 primitive polynomials and initial\n")
    out.write("// direction numbers; dimension 0 is the van der Corput sequence.\n\n")
    out.write(f"constexpr std::size_t kSobolMaxDims = {max_dims};\n\n")
    out.write("// Polynomial bit pattern including leading and trailing ones.\n")
    out.write("constexpr std::uint32_t kSobolPoly[kSobolMaxDims] = {\n")
    for i in range(0, max_dims, 12):
        chunk = ", ".join(str(int(p)) for p in poly[i:i + 12])
        out.write(f"    {chunk},\n")
    out.write("};\n\n")

    degrees = [int(p).bit_length() - 1 for p in poly[:max_dims]]
    offsets = []
    flat = []
    for dim in range(max_dims):
        offsets.append(len(flat))
        flat.extend(int(v) for v in vinit[dim][:degrees[dim]])
    offsets.append(len(flat))

    out.write("// Offsets into kSobolInitM; dimension d owns [offset[d], offset[d+1]).\n")
    out.write("constexpr std::uint32_t kSobolInitOffset[kSobolMaxDims + 1] = {\n")
    for i in range(0, len(offsets), 12):
        chunk = ", ".join(str(o) for o in offsets[i:i + 12])
        out.write(f"    {chunk},\n")
    out.write("};\n\n")

    out.write(f"constexpr std::uint32_t kSobolInitM[{len(flat)}] = {{\n")
    for i in range(0, len(flat), 16):
        chunk = ", ".join(str(v) for v in flat[i:i + 16])
        out.write(f"    {chunk},\n")
    out.write("};\n")


if __name__ == "__main__":
    main()
