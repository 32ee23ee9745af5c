#pragma once

// Lossless baseline measurement through an external Brotli-format codec. The
// codec is loaded at runtime (no headers or link-time dependency); when it is
// missing the measurement degrades to an entry marked unavailable and the
// rest of the pipeline proceeds.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <dlfcn.h>

#include "wavecast/errors.hpp"

namespace wavecast::lossless {

struct Measurement {
    bool available = false;
    std::uint64_t bytes_raw = 0;
    std::uint64_t bytes_compressed = 0;
    double rate = 0.0;  // 1 - compressed/raw
};

namespace detail {

// BrotliEncoderCompress / BrotliDecoderDecompress signatures per the public
// C API; resolved lazily from the versioned shared objects.
using EncodeFn = int (*)(int quality, int lgwin, int mode, std::size_t input_size,
                         const std::uint8_t* input_buffer, std::size_t* encoded_size,
                         std::uint8_t* encoded_buffer);
using BoundFn = std::size_t (*)(std::size_t input_size);
using DecodeFn = int (*)(std::size_t encoded_size, const std::uint8_t* encoded_buffer,
                         std::size_t* decoded_size, std::uint8_t* decoded_buffer);

struct Codec {
    EncodeFn encode = nullptr;
    BoundFn bound = nullptr;
    DecodeFn decode = nullptr;
};

inline const Codec& codec() {
    static const Codec c = [] {
        Codec out;
        if (void* enc = dlopen("libbrotlienc.so.1", RTLD_NOW | RTLD_GLOBAL)) {
            out.encode = reinterpret_cast<EncodeFn>(dlsym(enc, "BrotliEncoderCompress"));
            out.bound = reinterpret_cast<BoundFn>(
                dlsym(enc, "BrotliEncoderMaxCompressedSize"));
        }
        if (void* dec = dlopen("libbrotlidec.so.1", RTLD_NOW | RTLD_GLOBAL))
            out.decode = reinterpret_cast<DecodeFn>(dlsym(dec, "BrotliDecoderDecompress"));
        return out;
    }();
    return c;
}

}  // namespace detail

inline bool codec_available() {
    const auto& c = detail::codec();
    return c.encode && c.bound && c.decode;
}

inline std::vector<std::uint8_t> compress_bytes(const std::vector<std::uint8_t>& raw,
                                                int quality = 9) {
    const auto& c = detail::codec();
    if (!codec_available()) throw error("lossless codec unavailable");
    std::size_t out_size = c.bound(raw.size());
    if (out_size == 0) out_size = raw.size() + 1024;
    std::vector<std::uint8_t> out(out_size);
    // mode 0 = generic, lgwin 22 = default window
    if (!c.encode(quality, 22, 0, raw.size(), raw.data(), &out_size, out.data()))
        throw error("lossless encode failed");
    out.resize(out_size);
    return out;
}

inline std::vector<std::uint8_t> decompress_bytes(const std::vector<std::uint8_t>& comp,
                                                  std::size_t expected_size) {
    const auto& c = detail::codec();
    if (!codec_available()) throw error("lossless codec unavailable");
    std::size_t out_size = expected_size;
    std::vector<std::uint8_t> out(out_size);
    // 1 == BROTLI_DECODER_RESULT_SUCCESS
    if (c.decode(comp.size(), comp.data(), &out_size, out.data()) != 1)
        throw data_error("lossless decode failed");
    out.resize(out_size);
    return out;
}

inline Measurement measure_lossless(const std::vector<std::uint8_t>& raw,
                                    WarningLog* warnings = nullptr) {
    Measurement m;
    m.bytes_raw = raw.size();
    if (!codec_available()) {
        warn(warnings, "lossless codec unavailable; baseline not measured");
        return m;
    }
    const auto comp = compress_bytes(raw);
    m.available = true;
    m.bytes_compressed = comp.size();
    m.rate = raw.empty() ? 0.0
                         : 1.0 - static_cast<double>(comp.size()) /
                                     static_cast<double>(raw.size());
    return m;
}

}  // namespace wavecast::lossless
