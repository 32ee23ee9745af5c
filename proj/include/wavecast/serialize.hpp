#pragma once

// Binary formats, all little-endian:
//   WVC1 single signal: magic "WVC1" | version u8 | wavelet id u8 |
//     boundary mode u8 | levels u8 | original_length u64 | kept_count u64 |
//     kept indices as LEB128 varints (first absolute, then gaps) |
//     kept values as raw float64.
//   WVB1 frame bundle: magic "WVB1" | version u8 | variable count u8 |
//     start_epoch_s i64 | step_seconds i64 | per variable: role u8
//     (0 target / 1 past / 2 future) | name (u16 length + bytes) |
//     block length u64 | WVC1 block.
// Identical inputs serialize to identical bytes.

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "wavecast/compression.hpp"
#include "wavecast/errors.hpp"

namespace wavecast::compression {

using Bytes = std::vector<std::uint8_t>;

namespace detail {

inline void put_u8(Bytes& b, std::uint8_t v) { b.push_back(v); }

inline void put_u64(Bytes& b, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_i64(Bytes& b, std::int64_t v) {
    put_u64(b, static_cast<std::uint64_t>(v));
}

inline void put_f64(Bytes& b, double v) {
    put_u64(b, std::bit_cast<std::uint64_t>(v));
}

inline void put_varint(Bytes& b, std::uint64_t v) {
    while (v >= 0x80) {
        b.push_back(static_cast<std::uint8_t>(v) | 0x80);
        v >>= 7;
    }
    b.push_back(static_cast<std::uint8_t>(v));
}

struct Cursor {
    const std::uint8_t* p;
    std::size_t size;
    std::size_t off = 0;

    void need(std::size_t n, const char* what) const {
        if (off + n > size)
            throw format_error(std::string("truncated while reading ") + what, off);
    }
    std::uint8_t u8(const char* what) {
        need(1, what);
        return p[off++];
    }
    std::uint64_t u64(const char* what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{p[off + static_cast<std::size_t>(i)]} << (8 * i);
        off += 8;
        return v;
    }
    std::int64_t i64(const char* what) { return static_cast<std::int64_t>(u64(what)); }
    double f64(const char* what) { return std::bit_cast<double>(u64(what)); }
    std::uint64_t varint(const char* what) {
        std::uint64_t v = 0;
        int shift = 0;
        while (true) {
            const std::uint8_t byte = u8(what);
            if (shift >= 64)
                throw format_error(std::string("varint overflow in ") + what, off);
            v |= static_cast<std::uint64_t>(byte & 0x7F) << shift;
            if (!(byte & 0x80)) return v;
            shift += 7;
        }
    }
};

}  // namespace detail

inline constexpr std::uint8_t kSignalVersion = 1;
inline constexpr std::uint8_t kBundleVersion = 1;

inline Bytes serialize(const CompressedSignal& cs) {
    Bytes b;
    b.insert(b.end(), {'W', 'V', 'C', '1'});
    detail::put_u8(b, kSignalVersion);
    detail::put_u8(b, wavelet::wavelet_id(cs.wavelet));
    detail::put_u8(b, static_cast<std::uint8_t>(cs.boundary_mode));
    detail::put_u8(b, static_cast<std::uint8_t>(cs.levels));
    detail::put_u64(b, cs.original_length);
    detail::put_u64(b, cs.kept.size());
    std::uint64_t prev = 0;
    bool first = true;
    for (const auto& [i, v] : cs.kept) {
        (void)v;
        detail::put_varint(b, first ? i : i - prev);
        prev = i;
        first = false;
    }
    for (const auto& [i, v] : cs.kept) {
        (void)i;
        detail::put_f64(b, v);
    }
    return b;
}

inline CompressedSignal deserialize_signal(detail::Cursor& c) {
    c.need(4, "magic");
    if (std::memcmp(c.p + c.off, "WVC1", 4) != 0)
        throw format_error("bad signal magic", c.off);
    c.off += 4;
    const std::uint8_t version = c.u8("version");
    if (version != kSignalVersion)
        throw format_error("unsupported signal version " + std::to_string(version),
                           c.off - 1);
    CompressedSignal cs;
    cs.wavelet = wavelet::bank_by_id(c.u8("wavelet id")).name;
    const std::uint8_t mode = c.u8("boundary mode");
    if (mode > 1) throw format_error("bad boundary mode " + std::to_string(mode), c.off - 1);
    cs.boundary_mode = static_cast<Boundary>(mode);
    cs.levels = c.u8("levels");
    if (cs.levels < 1) throw format_error("levels must be >= 1", c.off - 1);
    cs.original_length = c.u64("original length");
    const std::uint64_t count = c.u64("kept count");
    if (count > c.size - c.off)  // each kept entry needs at least 1 index byte
        throw format_error("kept count exceeds remaining bytes", c.off - 8);
    cs.kept.resize(count);
    std::uint64_t idx = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t gap = c.varint("kept index");
        idx = (i == 0) ? gap : idx + gap;
        if (i > 0 && gap == 0)
            throw format_error("kept indices not strictly increasing", c.off);
        cs.kept[i].first = idx;
    }
    for (std::uint64_t i = 0; i < count; ++i) cs.kept[i].second = c.f64("kept value");
    return cs;
}

inline CompressedSignal deserialize(const Bytes& bytes) {
    detail::Cursor c{bytes.data(), bytes.size()};
    CompressedSignal cs = deserialize_signal(c);
    if (c.off != c.size) throw format_error("trailing bytes after signal", c.off);
    // The requested rate is not stored; reconstruct it from the achieved rate.
    cs.rate = cs.achieved_rate();
    return cs;
}

inline Bytes serialize_frame(const CompressedFrame& cf) {
    if (cf.variables.size() != 1 + cf.past_names.size() + cf.future_names.size())
        throw usage_error("bundle variable count does not match its names");
    if (cf.variables.size() > 255) throw usage_error("bundle supports at most 255 variables");
    Bytes b;
    b.insert(b.end(), {'W', 'V', 'B', '1'});
    detail::put_u8(b, kBundleVersion);
    detail::put_u8(b, static_cast<std::uint8_t>(cf.variables.size()));
    detail::put_i64(b, cf.start_epoch_s);
    detail::put_i64(b, cf.step_seconds);
    auto put_block = [&](std::uint8_t role, const std::string& name,
                         const CompressedSignal& cs) {
        detail::put_u8(b, role);
        if (name.size() > 0xFFFF) throw usage_error("variable name too long");
        detail::put_u8(b, static_cast<std::uint8_t>(name.size() & 0xFF));
        detail::put_u8(b, static_cast<std::uint8_t>(name.size() >> 8));
        b.insert(b.end(), name.begin(), name.end());
        const Bytes block = serialize(cs);
        detail::put_u64(b, block.size());
        b.insert(b.end(), block.begin(), block.end());
    };
    put_block(0, cf.target_name, cf.variables[0]);
    for (std::size_t p = 0; p < cf.past_names.size(); ++p)
        put_block(1, cf.past_names[p], cf.variables[1 + p]);
    for (std::size_t q = 0; q < cf.future_names.size(); ++q)
        put_block(2, cf.future_names[q], cf.variables[1 + cf.past_names.size() + q]);
    return b;
}

inline CompressedFrame deserialize_frame(const Bytes& bytes) {
    detail::Cursor c{bytes.data(), bytes.size()};
    c.need(4, "magic");
    if (std::memcmp(c.p + c.off, "WVB1", 4) != 0)
        throw format_error("bad bundle magic", c.off);
    c.off += 4;
    const std::uint8_t version = c.u8("version");
    if (version != kBundleVersion)
        throw format_error("unsupported bundle version " + std::to_string(version),
                           c.off - 1);
    const std::uint8_t nvars = c.u8("variable count");
    if (nvars == 0) throw format_error("empty bundle", c.off - 1);
    CompressedFrame cf;
    cf.start_epoch_s = c.i64("start timestamp");
    cf.step_seconds = c.i64("step seconds");
    struct Block {
        std::uint8_t role;
        std::string name;
        CompressedSignal cs;
    };
    std::vector<Block> blocks;
    for (std::uint8_t v = 0; v < nvars; ++v) {
        const std::uint8_t role = c.u8("variable role");
        if (role > 2) throw format_error("bad variable role " + std::to_string(role), c.off - 1);
        const std::size_t name_len =
            c.u8("name length") | (std::size_t{c.u8("name length")} << 8);
        c.need(name_len, "variable name");
        std::string name(reinterpret_cast<const char*>(c.p + c.off), name_len);
        c.off += name_len;
        const std::uint64_t block_len = c.u64("block length");
        c.need(block_len, "signal block");
        detail::Cursor sub{c.p + c.off, static_cast<std::size_t>(block_len)};
        CompressedSignal cs = deserialize_signal(sub);
        if (sub.off != sub.size)
            throw format_error("trailing bytes in signal block", c.off + sub.off);
        cs.rate = cs.achieved_rate();
        c.off += block_len;
        blocks.push_back({role, std::move(name), std::move(cs)});
    }
    if (c.off != c.size) throw format_error("trailing bytes after bundle", c.off);
    // Assemble in role order regardless of stream order.
    std::size_t targets = 0;
    for (auto& bl : blocks)
        if (bl.role == 0) {
            ++targets;
            cf.target_name = bl.name;
            cf.variables.push_back(std::move(bl.cs));
        }
    if (targets != 1)
        throw format_error("bundle must contain exactly one target block", c.off);
    for (auto& bl : blocks)
        if (bl.role == 1) {
            cf.past_names.push_back(bl.name);
            cf.variables.push_back(std::move(bl.cs));
        }
    for (auto& bl : blocks)
        if (bl.role == 2) {
            cf.future_names.push_back(bl.name);
            cf.variables.push_back(std::move(bl.cs));
        }
    return cf;
}

}  // namespace wavecast::compression
