#pragma once

// Persistence and acquisition of newform eigenvalue data: a versioned JSON
// file format (exact integer coefficients as decimal strings, FNV-1a-64
// content checksum) and an HTTP client for the LMFDB API with an on-disk,
// label+T keyed cache.

#include <filesystem>
#include <stdexcept>
#include <string>

#include "forms.hpp"

namespace rsl::ingest {

using arith::i64;

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ChecksumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NetworkError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedFormError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

// Canonical serialization (fixed key order, 2-space indent, trailing
// newline); byte-identical across save/load round trips.
std::string serialize_newform(const forms::NewformData& form);
void save_newform(const forms::NewformData& form, const std::filesystem::path& path);

// Load + full invariant validation. Throws SchemaError / ChecksumError /
// forms::HeckeRelationError.
forms::NewformData load_newform(const std::filesystem::path& path);
forms::NewformData parse_newform(const std::string& json_text);

struct FetchConfig {
    std::string base_url = "https://www.lmfdb.org";
    std::filesystem::path cache_dir = "lmfdb-cache";
    bool offline = false;
    int timeout_seconds = 30;
    int retries = 3;
    std::string user_agent;  // default assembled from the library version
};

// Retrieves the q-expansion of a rational newform from the LMFDB API,
// converts it to the file schema, writes it into the cache, and returns the
// validated form. Subsequent calls for the same (label, T) are cache hits
// with no network I/O. Only rational (dimension-1, real quadratic or
// trivial nebentypus) newforms are supported.
forms::NewformData fetch_lmfdb(const std::string& label, i64 T, const FetchConfig& config);

// Cache path for a given (label, T).
std::filesystem::path cache_path(const FetchConfig& config, const std::string& label, i64 T);

// Parses an LMFDB /api/mf_newforms response payload into a NewformData.
// Exposed for hermetic tests.
forms::NewformData parse_lmfdb_response(const std::string& body, const std::string& label,
                                        i64 T);

std::string fnv1a64_hex(const std::string& bytes);

}  // namespace rsl::ingest
