#pragma once

#include <iosfwd>
#include <string>

#include "cdops/cd_matrix.hpp"
#include "cdops/twisted.hpp"

namespace cdops {

/// Binary file formats, all little-endian regardless of host:
///
/// kernel block ("CDKB"): magic, u32 version, u32 q, f64 weight, then q*q
/// complex entries in row-major order as (re, im) f64 pairs.
///
/// matrix container ("CDMX") and twisted element ("CDTW"): magic, u32
/// version, group config string, u8 window kind, i32 radius, then a label
/// table (u32 count, label strings), then per label a u32 column count and
/// per column the column string followed by the raw q*q grid of the block.
/// Strings are u32 length + bytes.

void save_block(std::ostream& out, const KernelBlock& block);
KernelBlock load_block(std::istream& in);

void save_matrix(std::ostream& out, const CDMatrix& m);
CDMatrix load_matrix(std::istream& in);

void save_twisted(std::ostream& out, const TwistedElement& f);
TwistedElement load_twisted(std::istream& in);

void save_block_file(const std::string& path, const KernelBlock& block);
KernelBlock load_block_file(const std::string& path);
void save_matrix_file(const std::string& path, const CDMatrix& m);
CDMatrix load_matrix_file(const std::string& path);

}  // namespace cdops
