#include "ingest.hpp"

#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#ifdef RSL_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace rsl::ingest {

using forms::NewformData;
using json = nlohmann::ordered_json;

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return std::string(buf);
}

namespace {

json char_to_json(const arith::DirichletCharacter& chi) {
    json j;
    j["modulus"] = chi.modulus();
    if (chi.is_trivial()) {
        j["kind"] = "trivial";
    } else {
        j["kind"] = "kronecker";
        j["discriminant"] = chi.discriminant();
    }
    return j;
}

arith::DirichletCharacter char_from_json(const json& j) {
    if (!j.contains("modulus") || !j.contains("kind"))
        throw SchemaError("newform file: char block missing modulus/kind");
    i64 mod = j.at("modulus").get<i64>();
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "trivial") return arith::DirichletCharacter::trivial(mod);
    if (kind == "kronecker") {
        i64 D = j.at("discriminant").get<i64>();
        auto chi = arith::DirichletCharacter::kronecker_char(D);
        if (chi.modulus() != mod)
            throw SchemaError("newform file: character modulus does not match |D|");
        return chi;
    }
    throw SchemaError("newform file: unsupported character kind '" + kind + "'");
}

json body_json(const NewformData& form) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["label"] = form.label();
    j["level"] = form.level();
    j["weight"] = form.weight();
    j["char"] = char_to_json(form.nebentypus());
    j["T"] = form.table_length();
    json coeffs = json::array();
    for (i64 n = 1; n <= form.table_length(); ++n)
        coeffs.push_back(arith::to_string_i128(form.raw(n)));
    j["coefficients"] = std::move(coeffs);
    json al = json::array();
    for (auto& s : form.atkin_lehner_table()) {
        json e;
        e["p"] = s.p;
        e["sign"] = s.sign;
        e["provenance"] = s.provenance;
        al.push_back(std::move(e));
    }
    j["atkin_lehner"] = std::move(al);
    j["source"] = form.source();
    return j;
}

}  // namespace

std::string serialize_newform(const NewformData& form) {
    if (!form.has_raw())
        throw SchemaError("serialize_newform: derived forms have no exact coefficient table");
    json j = body_json(form);
    std::string body = j.dump(2);
    j["checksum"] = "fnv1a64:" + fnv1a64_hex(body);
    return j.dump(2) + "\n";
}

void save_newform(const NewformData& form, const std::filesystem::path& path) {
    std::string text = serialize_newform(form);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("save_newform: cannot open " + tmp.string());
        out << text;
    }
    std::filesystem::rename(tmp, path);
}

NewformData parse_newform(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw SchemaError(std::string("newform file: JSON parse error: ") + e.what());
    }
    for (const char* key :
         {"schema_version", "label", "level", "weight", "char", "T", "coefficients",
          "atkin_lehner", "source", "checksum"}) {
        if (!j.contains(key)) throw SchemaError(std::string("newform file: missing field ") + key);
    }
    if (j.at("schema_version").get<int>() != kSchemaVersion)
        throw SchemaError("newform file: unsupported schema version");
    std::string checksum = j.at("checksum").get<std::string>();
    json body = j;
    body.erase("checksum");
    std::string expect = "fnv1a64:" + fnv1a64_hex(body.dump(2));
    if (checksum != expect) throw ChecksumError("newform file: checksum mismatch");

    i64 T = j.at("T").get<i64>();
    const auto& coeffs = j.at("coefficients");
    if (!coeffs.is_array() || i64(coeffs.size()) != T)
        throw SchemaError("newform file: coefficient array length differs from T");
    std::vector<arith::i128> raw;
    raw.reserve(size_t(T));
    for (auto& c : coeffs) raw.push_back(arith::parse_i128(c.get<std::string>()));

    NewformData form(j.at("label").get<std::string>(), j.at("level").get<i64>(),
                     j.at("weight").get<int>(), char_from_json(j.at("char")), std::move(raw),
                     j.at("source").get<std::string>());
    for (auto& e : j.at("atkin_lehner")) {
        form.set_atkin_lehner(e.at("p").get<i64>(), e.at("sign").get<int>(),
                              e.at("provenance").get<std::string>());
    }
    return form;
}

NewformData load_newform(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("load_newform: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_newform(ss.str());
}

std::filesystem::path cache_path(const FetchConfig& config, const std::string& label, i64 T) {
    return config.cache_dir / (label + ".T" + std::to_string(T) + ".json");
}

NewformData parse_lmfdb_response(const std::string& body, const std::string& label, i64 T) {
    json j;
    try {
        j = json::parse(body);
    } catch (const std::exception& e) {
        throw SchemaError(std::string("lmfdb response: JSON parse error: ") + e.what());
    }
    if (!j.contains("data") || !j.at("data").is_array() || j.at("data").empty())
        throw SchemaError("lmfdb response: no data for label " + label);
    const auto& rec = j.at("data").at(0);
    for (const char* key : {"level", "weight", "dim", "char_order", "traces"}) {
        if (!rec.contains(key))
            throw SchemaError(std::string("lmfdb response: missing field ") + key);
    }
    if (rec.at("dim").get<i64>() != 1)
        throw UnsupportedFormError("form " + label +
                                   " has a coefficient field of degree > 1; only rational "
                                   "newforms are supported");
    i64 level = rec.at("level").get<i64>();
    int weight = rec.at("weight").get<int>();
    i64 char_order = rec.at("char_order").get<i64>();
    arith::DirichletCharacter chi = arith::DirichletCharacter::trivial(level);
    if (char_order == 2) {
        if (!rec.contains("char_conductor") || !rec.contains("char_parity"))
            throw SchemaError("lmfdb response: quadratic character lacks conductor/parity");
        i64 cond = rec.at("char_conductor").get<i64>();
        i64 parity = rec.at("char_parity").get<i64>();
        i64 D = parity > 0 ? cond : -cond;
        chi = arith::DirichletCharacter::kronecker_char(D);
    } else if (char_order != 1) {
        throw UnsupportedFormError("form " + label + ": only trivial or quadratic nebentypus");
    }
    const auto& traces = rec.at("traces");
    if (i64(traces.size()) < T)
        throw SchemaError("lmfdb response: trace list shorter than requested T");
    std::vector<arith::i128> raw;
    raw.reserve(size_t(T));
    for (i64 n = 0; n < T; ++n) raw.push_back(arith::i128(traces.at(size_t(n)).get<i64>()));
    NewformData form(label, level, weight, chi, std::move(raw), "lmfdb");
    if (rec.contains("atkin_lehner_eigenvals") && rec.at("atkin_lehner_eigenvals").is_array()) {
        for (auto& e : rec.at("atkin_lehner_eigenvals"))
            form.set_atkin_lehner(e.at(0).get<i64>(), e.at(1).get<int>(), "lmfdb");
    }
    return form;
}

namespace {

class FileLock {
  public:
    explicit FileLock(const std::filesystem::path& p) {
        fd_ = ::open(p.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ >= 0) ::flock(fd_, LOCK_EX);
    }
    ~FileLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }

  private:
    int fd_ = -1;
};

std::string http_get(const FetchConfig& config, const std::string& path) {
    std::string err;
    for (int attempt = 0; attempt < std::max(1, config.retries); ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(500 << (attempt - 1)));
        httplib::Client client(config.base_url);
        client.set_connection_timeout(config.timeout_seconds);
        client.set_read_timeout(config.timeout_seconds);
        std::string ua = config.user_agent.empty() ? "rsl/0.1 (+newform-cache)" : config.user_agent;
        httplib::Headers headers = {{"User-Agent", ua}};
        auto res = client.Get(path, headers);
        if (!res) {
            err = "connection failure (" + httplib::to_string(res.error()) + ")";
            continue;
        }
        if (res->status != 200) {
            err = "HTTP status " + std::to_string(res->status);
            if (res->status >= 400 && res->status < 500) break;  // no point retrying
            continue;
        }
        return res->body;
    }
    throw NetworkError("lmfdb fetch failed: " + err);
}

}  // namespace

NewformData fetch_lmfdb(const std::string& label, i64 T, const FetchConfig& config) {
    std::filesystem::create_directories(config.cache_dir);
    auto path = cache_path(config, label, T);
    FileLock lock(path.string() + ".lock");
    if (std::filesystem::exists(path)) return load_newform(path);
    if (config.offline)
        throw NetworkError("offline mode: " + label + " not in cache at " + path.string());
    std::string query = "/api/mf_newforms/?label=" + label + "&_format=json";
    std::string body = http_get(config, query);
    NewformData form = parse_lmfdb_response(body, label, T);
    save_newform(form, path);
    return form;
}

}  // namespace rsl::ingest
