// Copyright 2026 The maskstore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.hpp"

#include <fcntl.h>
#include <termios.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "maskstore/bench.hpp"
#include "maskstore/corpus.hpp"
#include "maskstore/errors.hpp"
#include "maskstore/kernels.hpp"
#include "maskstore/masked_array.hpp"
#include "maskstore/ope_client.hpp"
#include "maskstore/ope_server.hpp"
#include "maskstore/store.hpp"
#include "maskstore/transport.hpp"
#include "maskstore/triple_io.hpp"

namespace maskstore::cli {
namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_stop_signal(int) { g_stop = true; }

struct Options {
  std::string spec;
  std::string password_env = "MASKSTORE_PASSWORD";
  std::string salt_hex;
  std::string cipher = "gcm";
  std::string det_hash = "sha1";
  std::string ope_endpoint;
  std::size_t width = kDefaultOrdertextWidth;
  std::optional<std::int64_t> threshold;
  std::string sizes = "1000,10000,100000";
  std::string modes = "CLR,DET,OPE";
  std::uint64_t seed = 42;
  int repetitions = 5;
  std::size_t entries = 1000;
  std::string in = "-";
  std::string out = "-";
  std::string store;
  std::string remap_file;
  bool allow_rnd_keys = false;
  std::size_t numeric_width = 0;
  std::uint16_t port = 0;
  std::string bind = "127.0.0.1";
  std::string key_check;
  std::string state;
  std::string row;
  std::string col;
  std::string selector;
};

// Streams ------------------------------------------------------------------

std::vector<Triple> read_input(const Options& o, std::istream& in) {
  if (o.in == "-") return read_triples(in);
  return read_triples(std::filesystem::path(o.in));
}

void write_output(const Options& o, std::ostream& out, std::span<const Triple> triples) {
  if (o.out == "-") {
    write_triples(out, triples);
  } else {
    write_triples(std::filesystem::path(o.out), triples);
  }
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = std::min(text.find(',', start), text.size());
    if (comma > start) out.emplace_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

// Keys and sessions --------------------------------------------------------

std::string prompt_password() {
  const int fd = ::open("/dev/tty", O_RDWR | O_NOCTTY);
  if (fd < 0) return {};
  termios saved{};
  const bool have_tty = ::tcgetattr(fd, &saved) == 0;
  if (have_tty) {
    termios quiet = saved;
    quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
    ::tcsetattr(fd, TCSAFLUSH, &quiet);
  }
  constexpr std::string_view prompt = "Password: ";
  [[maybe_unused]] auto wrote = ::write(fd, prompt.data(), prompt.size());
  std::string password;
  char ch = 0;
  while (::read(fd, &ch, 1) == 1 && ch != '\n') password.push_back(ch);
  if (have_tty) ::tcsetattr(fd, TCSAFLUSH, &saved);
  wrote = ::write(fd, "\n", 1);
  ::close(fd);
  return password;
}

KeyMaterial load_key(const Options& o) {
  std::string password;
  if (const char* env = std::getenv(o.password_env.c_str()); env != nullptr) password = env;
  if (password.empty() && ::isatty(STDIN_FILENO)) password = prompt_password();
  if (password.empty()) {
    throw ConfigError("no password: set " + o.password_env + " or run from a terminal");
  }

  std::string salt_hex = o.salt_hex;
  if (salt_hex.empty()) {
    if (const char* env = std::getenv("MASKSTORE_SALT"); env != nullptr) salt_hex = env;
  }
  if (salt_hex.empty()) {
    throw ConfigError("no salt: pass --salt HEX or set MASKSTORE_SALT (see `maskstore salt`)");
  }
  const std::string salt = hex_decode(salt_hex);

  CipherMode cipher;
  if (o.cipher == "gcm") {
    cipher = CipherMode::GCM;
  } else if (o.cipher == "cbc") {
    cipher = CipherMode::CBC;
  } else {
    throw ConfigError("--cipher must be gcm or cbc");
  }
  KeyMaterial key = derive_key(
      password,
      std::span(reinterpret_cast<const std::uint8_t*>(salt.data()), salt.size()), kDefaultRounds,
      cipher);
  if (o.det_hash == "sha1") {
    key.det_hash = HashAlgorithm::SHA1;
  } else if (o.det_hash == "sha256") {
    key.det_hash = HashAlgorithm::SHA256;
  } else {
    throw ConfigError("--det-hash must be sha1 or sha256");
  }
  return key;
}

bool uses_ope(const MaskSpec& spec) {
  return spec.row == MaskMode::OPE || spec.col == MaskMode::OPE || spec.val == MaskMode::OPE;
}

// One TCP session to the OPE server, shared by every OPE dimension.
struct OpeSession {
  std::unique_ptr<TcpTransport> transport;
  std::unique_ptr<OpeClient> client;

  OpeBindings bind(const Options& o, const MaskSpec& spec, const KeyMaterial& key) {
    if (!uses_ope(spec)) return {};
    if (o.ope_endpoint.empty()) throw ConfigError("spec uses OPE; pass --ope-endpoint host:port");
    const auto [host, port] = parse_endpoint(o.ope_endpoint);
    transport = std::make_unique<TcpTransport>(host, port);
    client = std::make_unique<OpeClient>(*transport, key, key_check_token(key));
    auto pick = [&](MaskMode m) { return m == MaskMode::OPE ? client.get() : nullptr; };
    return {pick(spec.row), pick(spec.col), pick(spec.val)};
  }
};

// Masks a query key; nullopt when an OPE key was never inserted.
std::optional<std::string> mask_key(const std::string& plaintext, MaskMode mode,
                                    const KeyMaterial& key, OpeClient* ope) {
  switch (mode) {
    case MaskMode::RND:
      throw ConfigError("RND keys cannot be queried");
    case MaskMode::OPE: {
      const auto found = ope->find(plaintext);
      if (!found) return std::nullopt;
      return found->bits();
    }
    default:
      return mask(plaintext, mode, key).payload;
  }
}

void write_remap(const std::filesystem::path& file, const Remap& remap) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw StoreError("cannot open " + file.string() + " for writing");
  for (const auto& [from, to] : remap) out << from.bits() << '\t' << to.bits() << '\n';
  if (!out.flush()) throw StoreError("write to " + file.string() + " failed");
}

Remap read_remap(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw StoreError("cannot open " + file.string());
  Remap remap;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError(file.string() + ":" + std::to_string(lineno) + ": expected old<TAB>new");
    }
    const std::string_view view(line);
    remap.emplace(OrderText::parse(view.substr(0, tab), tab),
                  OrderText::parse(view.substr(tab + 1), line.size() - tab - 1));
  }
  return remap;
}

TripleStore load_store(const Options& o) {
  if (o.store.empty()) throw ConfigError("--store PATH is required");
  return TripleStore::load(o.store);
}

// Commands -----------------------------------------------------------------

int cmd_salt(std::ostream& out) {
  const Salt salt = random_salt();
  out << hex_encode(std::string_view(reinterpret_cast<const char*>(salt.data()), salt.size()))
      << '\n';
  return kSuccess;
}

int cmd_keycheck(const Options& o, std::ostream& out) {
  out << key_check_token(load_key(o)) << '\n';
  return kSuccess;
}

int cmd_gen(const Options& o, std::ostream& out) {
  const auto corpus = generate_corpus({.entries = o.entries, .seed = o.seed});
  write_output(o, out, corpus.triples());
  return kSuccess;
}

int cmd_mask(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const MaskSpec spec = MaskSpec::parse(o.spec);
  auto triples = read_input(o, in);
  if (o.numeric_width > 0) {
    for (auto& t : triples) {
      t.row = pad_numeric(t.row, o.numeric_width);
      t.col = pad_numeric(t.col, o.numeric_width);
      t.val = pad_numeric(t.val, o.numeric_width);
    }
  }
  const KeyMaterial key = load_key(o);
  OpeSession session;
  const OpeBindings ope = session.bind(o, spec, key);
  const auto masked = mask_triples(triples, spec, key, ope, MaskOptions{o.allow_rnd_keys});
  write_output(o, out, masked);

  if (session.client && !session.client->pending_remap().empty()) {
    const Remap remap = session.client->take_remap();
    if (!o.remap_file.empty()) {
      write_remap(o.remap_file, remap);
      err << "OPE tree was rebalanced; " << remap.size() << " ordertext(s) written to "
          << o.remap_file << "\n";
    } else {
      err << "warning: OPE tree was rebalanced; previously stored ordertexts are stale "
             "(pass --remap-out to capture the remap)\n";
    }
  }
  return kSuccess;
}

int cmd_unmask(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const MaskSpec spec = MaskSpec::parse(o.spec);
  const auto triples = read_input(o, in);
  const KeyMaterial key = load_key(o);
  OpeSession session;
  const OpeBindings ope = session.bind(o, spec, key);
  try {
    write_output(o, out, unmask_triples(triples, spec, key, ope));
    return kSuccess;
  } catch (const UnmaskError&) {
  } catch (const FormatError&) {
  } catch (const NotFound&) {
  }
  // Something failed; find every offending line.
  std::size_t bad = 0;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    try {
      unmask_triples(std::span(&triples[i], 1), spec, key, ope);
    } catch (const Error& e) {
      if (dynamic_cast<const ProtocolError*>(&e) != nullptr) throw;
      err << "line " << i + 1 << ": " << e.what() << '\n';
      ++bad;
    }
  }
  err << bad << " line(s) failed to unmask\n";
  return kIntegrity;
}

int cmd_ingest(const Options& o, std::istream& in, std::ostream& out) {
  if (o.store.empty()) throw ConfigError("--store PATH is required");
  const bool exists = std::filesystem::exists(o.store);
  if (!exists && o.spec.empty()) throw ConfigError("new store needs --spec ROW,COL,VAL");
  TripleStore store = exists ? TripleStore::load(o.store) : TripleStore(MaskSpec::parse(o.spec));
  if (exists && !o.spec.empty() && MaskSpec::parse(o.spec) != store.spec()) {
    throw ConfigError("--spec " + o.spec + " does not match the store's " +
                      store.spec().to_string());
  }
  const auto triples = read_input(o, in);
  const std::size_t n = store.ingest(triples);
  store.persist(o.store);
  out << "ingested " << n << " triple(s); store holds " << store.size() << '\n';
  return kSuccess;
}

int cmd_query(const Options& o, std::ostream& out) {
  if (!o.row.empty() && !o.col.empty()) throw ConfigError("--row and --col are exclusive");
  const TripleStore store = load_store(o);
  const MaskSpec& spec = store.spec();
  const KeyMaterial key = load_key(o);
  OpeSession session;
  const OpeBindings ope = session.bind(o, spec, key);

  std::vector<Triple> hits;
  if (!o.row.empty()) {
    if (const auto k = mask_key(o.row, spec.row, key, ope.row)) hits = store.scan_row(*k);
  } else if (!o.col.empty()) {
    if (const auto k = mask_key(o.col, spec.col, key, ope.col)) hits = store.scan_col(*k);
  } else {
    hits = store.scan_all();
  }
  auto clear = unmask_triples(hits, spec, key, ope);
  std::sort(clear.begin(), clear.end(), [](const Triple& a, const Triple& b) {
    return std::tie(a.row, a.col, a.val) < std::tie(b.row, b.col, b.val);
  });
  write_output(o, out, clear);
  return kSuccess;
}

int cmd_correlate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.selector.empty()) throw ConfigError("--selector is required");
  if (o.threshold && *o.threshold < 0) throw ConfigError("--threshold must be >= 0");
  const TripleStore store = load_store(o);
  const MaskSpec& spec = store.spec();
  const KeyMaterial key = load_key(o);
  OpeSession session;
  const OpeBindings ope = session.bind(o, spec, key);

  const auto selector = mask_key(o.selector, spec.col, key, ope.col);
  if (!selector) return kSuccess;
  CorrelationResult result = correlate(store, spec, std::vector<std::string>{*selector});
  if (o.threshold) result = threshold_masked(result, *o.threshold);
  const MaskSpec declared{spec.col, spec.col, MaskMode::CLR};
  const OpeBindings result_ope{ope.col, ope.col, nullptr};
  std::size_t warnings = 0;
  const auto clear = unmask_result(result, declared, key, result_ope, &warnings);
  if (warnings > 0) err << "warning: counts are reported in the clear\n";
  write_output(o, out, clear.triples());
  return kSuccess;
}

int cmd_threshold(const Options& o, std::istream& in, std::ostream& out) {
  if (!o.threshold) throw ConfigError("--threshold is required");
  const auto triples = read_input(o, in);
  const auto filtered = threshold(AssociativeArray::from_triples(triples), *o.threshold);
  write_output(o, out, filtered.triples());
  return kSuccess;
}

int cmd_remap(const Options& o, std::ostream& out) {
  TripleStore store = load_store(o);
  const MaskSpec spec = store.spec();
  if (!uses_ope(spec)) throw ConfigError("store " + o.store + " has no OPE dimension");

  Remap remap;
  if (!o.remap_file.empty()) {
    remap = read_remap(o.remap_file);
  } else {
    const KeyMaterial key = load_key(o);
    OpeSession session;
    session.bind(o, spec, key);
    remap = session.client->rebalance();
  }
  TripleStore updated = store;
  if (spec.row == MaskMode::OPE) updated.apply_remap(Dimension::Row, remap);
  if (spec.col == MaskMode::OPE) updated.apply_remap(Dimension::Col, remap);
  if (spec.val == MaskMode::OPE) updated.apply_remap(Dimension::Val, remap);
  updated.persist(o.store);
  out << "remapped " << updated.size() << " triple(s) with " << remap.size() << " ordertext(s)\n";
  return kSuccess;
}

int cmd_ope_server(const Options& o, std::ostream& out) {
  std::optional<std::string> key_check;
  if (!o.key_check.empty()) key_check = o.key_check;
  std::unique_ptr<OpeServer> server;
  if (!o.state.empty() && std::filesystem::exists(o.state)) {
    server = std::make_unique<OpeServer>(OpeTree::load(o.state), key_check);
  } else {
    server = std::make_unique<OpeServer>(o.width, key_check);
  }
  TcpServer tcp(*server, o.port, o.bind);

  g_stop = false;
  std::signal(SIGINT, on_stop_signal);
  std::signal(SIGTERM, on_stop_signal);
  out << "listening on " << o.bind << ':' << tcp.port() << std::endl;
  tcp.serve([] { return g_stop.load(); });
  std::signal(SIGINT, SIG_DFL);
  std::signal(SIGTERM, SIG_DFL);

  if (!o.state.empty()) {
    server->save(o.state);
    out << "saved " << server->size() << " entr" << (server->size() == 1 ? "y" : "ies") << " to "
        << o.state << std::endl;
  }
  return kSuccess;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  BenchConfig config;
  config.sizes.clear();
  for (const auto& s : split_list(o.sizes)) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used != s.size() || v < 1) throw std::invalid_argument(s);
      config.sizes.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw ConfigError("--sizes entries must be integers >= 1, got '" + s + "'");
    }
  }
  config.modes = split_list(o.modes);
  config.seed = o.seed;
  config.repetitions = o.repetitions;
  const BenchReport report = run_bench(config, &err);
  if (o.out == "-") {
    report.write_tsv(out);
    report.write_summary(err);
  } else {
    std::ofstream file(o.out, std::ios::trunc);
    if (!file) throw StoreError("cannot open " + o.out + " for writing");
    report.write_tsv(file);
    if (!file.flush()) throw StoreError("write to " + o.out + " failed");
    report.write_summary(out);
  }
  return kSuccess;
}

// Parser -------------------------------------------------------------------

void add_key_options(CLI::App* app, Options& o) {
  app->add_option("--password-env", o.password_env,
                  "Environment variable holding the password (prompted when unset)");
  app->add_option("--salt", o.salt_hex, "Key-derivation salt, 16 hex digits (or MASKSTORE_SALT)");
  app->add_option("--cipher", o.cipher, "RND cipher: gcm or cbc")
      ->check(CLI::IsMember({"gcm", "cbc"}));
  app->add_option("--det-hash", o.det_hash, "DET IV hash: sha1 or sha256")
      ->check(CLI::IsMember({"sha1", "sha256"}));
}

void add_ope_option(CLI::App* app, Options& o) {
  app->add_option("--ope-endpoint", o.ope_endpoint, "OPE server host:port");
}

}  // namespace

std::string pad_numeric(std::string_view field, std::size_t width) {
  if (field.empty() || !std::all_of(field.begin(), field.end(),
                                    [](char c) { return c >= '0' && c <= '9'; })) {
    return std::string(field);
  }
  if (field.size() > width) {
    throw ValueError("number '" + std::string(field) + "' is wider than " + std::to_string(width) +
                     " digits");
  }
  return std::string(width - field.size(), '0') + std::string(field);
}

std::string hex_encode(std::string_view bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

std::string hex_decode(std::string_view hex) {
  auto nibble = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ConfigError("invalid hex digit in '" + std::string(hex) + "'");
  };
  if (hex.size() % 2 != 0) throw ConfigError("hex string has odd length");
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<char>(nibble(hex[i]) << 4 | nibble(hex[i + 1])));
  }
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UnmaskError*>(&e) != nullptr) return kIntegrity;
  if (dynamic_cast<const ProtocolError*>(&e) != nullptr ||
      dynamic_cast<const DepthExceeded*>(&e) != nullptr) {
    return kProtocol;
  }
  if (dynamic_cast<const ConfigError*>(&e) != nullptr ||
      dynamic_cast<const ArgumentError*>(&e) != nullptr ||
      dynamic_cast<const SchemaError*>(&e) != nullptr ||
      dynamic_cast<const ValueError*>(&e) != nullptr) {
    return kUsage;
  }
  return kEnvironment;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"Masked associative-array store with an order-preserving index", "maskstore"};
  app.require_subcommand(1);

  auto* salt = app.add_subcommand("salt", "Print a fresh random salt in hex");
  auto* keycheck = app.add_subcommand("keycheck", "Print the key-check token for ope-server");
  add_key_options(keycheck, o);

  auto* gen = app.add_subcommand("gen", "Write a synthetic tweet/word corpus as triples");
  gen->add_option("--entries", o.entries, "Number of entries")->check(CLI::PositiveNumber);
  gen->add_option("--seed", o.seed, "Generator seed");
  gen->add_option("--out", o.out, "Output file (- for stdout)");

  auto* mask_cmd = app.add_subcommand("mask", "Mask a triple file");
  auto* unmask_cmd = app.add_subcommand("unmask", "Unmask a triple file");
  for (auto* sub : {mask_cmd, unmask_cmd}) {
    sub->add_option("--spec", o.spec, "Masking spec ROW,COL,VAL, e.g. DET,DET,RND")->required();
    sub->add_option("--in", o.in, "Input triple file (- for stdin)");
    sub->add_option("--out", o.out, "Output triple file (- for stdout)");
    add_key_options(sub, o);
    add_ope_option(sub, o);
  }
  mask_cmd->add_flag("--allow-rnd-keys", o.allow_rnd_keys, "Permit RND row or column keys");
  mask_cmd->add_option("--numeric-width", o.numeric_width,
                       "Zero-pad all-digit fields to this width before masking");
  mask_cmd->add_option("--remap-out", o.remap_file,
                       "Write the remap here if the OPE tree is rebalanced");

  auto* server_cmd = app.add_subcommand("ope-server", "Run the untrusted OPE server");
  server_cmd->add_option("--port", o.port, "TCP port (0 picks one)");
  server_cmd->add_option("--bind", o.bind, "Bind address");
  server_cmd->add_option("--width", o.width, "Ordertext width in bits")
      ->check(CLI::Range(2, 4096));
  server_cmd->add_option("--key-check", o.key_check, "Token clients must present (see keycheck)");
  server_cmd->add_option("--state", o.state, "Load from and save to this file");

  auto* ingest = app.add_subcommand("ingest", "Add masked triples to a store");
  ingest->add_option("--store", o.store, "Store file")->required();
  ingest->add_option("--spec", o.spec, "Spec of a new store");
  ingest->add_option("--in", o.in, "Masked triple file (- for stdin)");

  auto* query = app.add_subcommand("query", "Scan a store and unmask the hits");
  query->add_option("--store", o.store, "Store file")->required();
  query->add_option("--row", o.row, "Plaintext row key");
  query->add_option("--col", o.col, "Plaintext column key");
  query->add_option("--out", o.out, "Output file (- for stdout)");
  add_key_options(query, o);
  add_ope_option(query, o);

  auto* corr = app.add_subcommand("correlate", "Co-occurrence counts for one column");
  corr->add_option("--store", o.store, "Store file")->required();
  corr->add_option("--selector", o.selector, "Plaintext column key, e.g. word|happy")->required();
  corr->add_option("--threshold", o.threshold, "Keep counts greater than this");
  corr->add_option("--out", o.out, "Output file (- for stdout)");
  add_key_options(corr, o);
  add_ope_option(corr, o);

  auto* thresh = app.add_subcommand("threshold", "Filter a count file");
  thresh->add_option("--threshold", o.threshold, "Keep counts greater than this")->required();
  thresh->add_option("--in", o.in, "Count triple file (- for stdin)");
  thresh->add_option("--out", o.out, "Output file (- for stdout)");

  auto* remap = app.add_subcommand("remap", "Rewrite a store's ordertexts after a rebalance");
  remap->add_option("--store", o.store, "Store file")->required();
  remap->add_option("--remap-file", o.remap_file, "Apply this saved remap instead of rebalancing");
  add_key_options(remap, o);
  add_ope_option(remap, o);

  auto* bench = app.add_subcommand("bench", "Time masked against clear operations");
  bench->add_option("--sizes", o.sizes, "Corpus sizes, comma separated");
  bench->add_option("--modes", o.modes, "Masking levels, comma separated");
  bench->add_option("--seed", o.seed, "Corpus seed");
  bench->add_option("--repetitions", o.repetitions, "Timed repetitions per cell")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", o.out, "TSV report file (- for stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (salt->parsed()) return cmd_salt(out);
    if (keycheck->parsed()) return cmd_keycheck(o, out);
    if (gen->parsed()) return cmd_gen(o, out);
    if (mask_cmd->parsed()) return cmd_mask(o, in, out, err);
    if (unmask_cmd->parsed()) return cmd_unmask(o, in, out, err);
    if (server_cmd->parsed()) return cmd_ope_server(o, out);
    if (ingest->parsed()) return cmd_ingest(o, in, out);
    if (query->parsed()) return cmd_query(o, out);
    if (corr->parsed()) return cmd_correlate(o, out, err);
    if (thresh->parsed()) return cmd_threshold(o, in, out);
    if (remap->parsed()) return cmd_remap(o, out);
    if (bench->parsed()) return cmd_bench(o, out, err);
  } catch (const std::exception& e) {
    err << "maskstore: " << e.what() << '\n';
    const int code = exit_code_for(e);
    if (code == kUsage) err << "run 'maskstore --help' for usage\n";
    return code;
  }
  return kUsage;
}

}  // namespace maskstore::cli
