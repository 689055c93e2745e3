#include "cli.hpp"

#include <signal.h>
#include <termios.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gridpass/attack_sim.hpp"
#include "gridpass/auth_service.hpp"
#include "gridpass/crosscheck.hpp"
#include "gridpass/decoder.hpp"
#include "gridpass/fixtures.hpp"
#include "gridpass/http_server.hpp"
#include "gridpass/random.hpp"

namespace gridpass::cli {

namespace {

constexpr std::size_t kGridColumns = 13;

int exit_code_for(const Error& e) { return e.code() == Errc::io_error ? kExitIoError : kExitUserError; }

std::string read_password(Io& io, const std::string& prompt) {
  std::string line;
  if (io.interactive) {
    io.err << prompt << std::flush;
    termios saved{};
    const bool have_tty = ::tcgetattr(STDIN_FILENO, &saved) == 0;
    if (have_tty) {
      termios quiet = saved;
      quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
      ::tcsetattr(STDIN_FILENO, TCSAFLUSH, &quiet);
    }
    std::getline(io.in, line);
    if (have_tty) ::tcsetattr(STDIN_FILENO, TCSAFLUSH, &saved);
    io.err << '\n';
  } else {
    std::getline(io.in, line);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string mask(const std::string& password) {
  return std::string(password.size(), '*') + " (" + std::to_string(password.size()) + " chars)";
}

int char_class(char ch) {
  const auto c = static_cast<unsigned char>(ch);
  if (std::isupper(c)) return 0;
  if (std::islower(c)) return 1;
  if (std::isdigit(c)) return 2;
  return 3;
}

// Rows of at most 13 "ch code" cells, starting a new row whenever the
// character class changes (upper, lower, digits, specials).
void print_grid(std::ostream& out, const CodeGrid& grid) {
  const auto& charset = grid.charset();
  std::size_t in_row = 0;
  for (std::size_t i = 0; i < charset.size(); ++i) {
    const bool new_class = i > 0 && char_class(charset.at(i)) != char_class(charset.at(i - 1));
    if (in_row == kGridColumns || (new_class && in_row > 0)) {
      out << '\n';
      in_row = 0;
    }
    out << (in_row ? "  " : "") << charset.at(i) << ' ' << static_cast<int>(grid.code_at(i));
    ++in_row;
  }
  out << '\n';
}

struct StoreFlags {
  std::string path = "gridpass.store";
};

void add_store_option(CLI::App* cmd, StoreFlags& flags) {
  cmd->add_option("--store", flags.path, "Credential store file")->capture_default_str();
}

int cmd_init_db(const StoreFlags& flags, const std::string& mode_name, bool force, Io& io) {
  if (!force && std::filesystem::exists(flags.path)) {
    io.err << "error: " << flags.path << " already exists (use --force to overwrite)\n";
    return kExitUserError;
  }
  const StoreMode mode = mode_name == "username-scoped" ? StoreMode::username_scoped : StoreMode::password_only;
  CredentialStore(default_charset(), mode).save(flags.path);
  io.out << "initialized " << flags.path << " (" << to_string(mode) << ", charset "
         << default_charset().id() << ")\n";
  return kExitOk;
}

int cmd_add_user(const StoreFlags& flags, const std::optional<std::string>& username, Io& io) {
  auto handle = StoreHandle::open(flags.path);
  const std::string password = read_password(io, "Password: ");
  CredentialRecord record{username, password};
  handle->update([&](const CredentialStore& s) { return s.add(record); });
  io.out << "added " << (username ? "user '" + *username + "'" : std::string("password")) << "; store has "
         << handle->snapshot()->size() << " record(s)\n";
  return kExitOk;
}

int cmd_remove_user(const StoreFlags& flags, const std::optional<std::string>& username, Io& io) {
  auto handle = StoreHandle::open(flags.path);
  if (username) {
    handle->update([&](const CredentialStore& s) { return s.remove_user(*username); });
  } else {
    const std::string password = read_password(io, "Password to remove: ");
    handle->update([&](const CredentialStore& s) { return s.remove_password(password); });
  }
  io.out << "removed; store has " << handle->snapshot()->size() << " record(s)\n";
  return kExitOk;
}

int cmd_list_users(const StoreFlags& flags, bool as_json, Io& io) {
  const CredentialStore store = CredentialStore::load(flags.path);
  if (as_json) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : store.records()) {
      nlohmann::json j = {{"password_length", r.password.size()}};
      if (r.username) j["username"] = *r.username;
      records.push_back(j);
    }
    io.out << nlohmann::json{{"mode", to_string(store.mode())}, {"charset", store.charset().id()}, {"records", records}}
                  .dump()
           << '\n';
    return kExitOk;
  }
  io.out << store.size() << " record(s), " << to_string(store.mode()) << '\n';
  std::size_t i = 0;
  for (const auto& r : store.records())
    io.out << ++i << '\t' << (r.username ? *r.username : "-") << '\t' << mask(r.password) << '\n';
  return kExitOk;
}

struct DemoFlags {
  std::optional<std::uint64_t> seed;
  std::string fixture;
  std::optional<std::string> encode;
  bool json = false;
};

int cmd_demo_grid(const DemoFlags& flags, Io& io) {
  std::optional<CodeGrid> grid;
  if (flags.fixture == "reference" || flags.fixture == "fig2") {
    grid = reference_grid();
  } else if (!flags.fixture.empty()) {
    io.err << "error: unknown fixture '" << flags.fixture << "' (known: reference, fig2)\n";
    return kExitUserError;
  } else if (flags.seed) {
    std::mt19937_64 rng(*flags.seed);
    grid = generate(default_charset(), rng);
  } else {
    SystemRandom rng;
    grid = generate(default_charset(), rng);
  }

  std::optional<DigitSequence> encoded;
  if (flags.encode) encoded = encode(*flags.encode, *grid);

  std::array<std::size_t, kCodeAlphabetSize> freq{};
  for (Digit d : grid->codes()) ++freq[d];
  const bool balanced = std::all_of(freq.begin(), freq.end(), [&](std::size_t f) { return f == grid->per_digit(); });

  if (flags.json) {
    nlohmann::json cells = nlohmann::json::array();
    for (std::size_t i = 0; i < grid->charset().size(); ++i)
      cells.push_back({{"ch", std::string(1, grid->charset().at(i))}, {"code", grid->code_at(i)}});
    nlohmann::json j = {{"charset", grid->charset().id()}, {"grid", cells}, {"frequency", freq}, {"balanced", balanced}};
    if (encoded) j["digits"] = encoded->to_string();
    io.out << j.dump() << '\n';
    return kExitOk;
  }

  print_grid(io.out, *grid);
  io.out << "\nfrequency:";
  for (std::size_t y = 0; y < freq.size(); ++y) io.out << ' ' << y << '=' << freq[y];
  io.out << (balanced ? "  (each digit labels exactly " + std::to_string(grid->per_digit()) + " characters)"
                      : "  (UNBALANCED)")
         << '\n';
  if (encoded) io.out << "digits: " << encoded->to_string() << '\n';
  return kExitOk;
}

struct AttackFlags {
  std::size_t k = 6;
  std::size_t trials = 10'000;
  std::optional<std::string> password;
  std::size_t random_length = 8;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::optional<std::string> csv;
  bool weak = false;
};

int cmd_simulate_attack(const AttackFlags& flags, Io& io) {
  ConvergenceOptions options;
  options.max_k = flags.k;
  options.trials = flags.trials;
  options.password = flags.password;
  options.random_length = flags.random_length;
  options.seed = flags.seed;
  options.threads = flags.threads;
  const auto rows = run_convergence(options);

  io.out << "strong observer (sees grid and digits), |X|=" << options.charset.size() << ", d="
         << options.charset.per_digit() << ", trials=" << flags.trials << '\n';
  io.out << "k  mean_survivors  closed_form  stderr    recovered\n";
  for (const auto& r : rows)
    io.out << std::left << std::setw(3) << r.k << std::fixed << std::setprecision(4) << std::setw(16)
           << r.mean_survivors << std::setw(13) << r.closed_form << std::setw(10) << r.standard_error
           << std::setprecision(3) << r.recovered_fraction << '\n';
  io.out.unsetf(std::ios::fixed | std::ios::left);

  if (flags.csv) {
    std::ofstream csv(*flags.csv);
    if (!csv) throw Error(Errc::io_error, "cannot write " + *flags.csv);
    write_convergence_csv(csv, rows);
  }

  if (flags.weak) {
    const std::string pw = flags.password.value_or(std::string(flags.random_length, 'A'));
    const auto weak = simulate_weak_observer(pw, options.charset, flags.trials, flags.seed);
    const double min_p = *std::min_element(weak.p_value.begin(), weak.p_value.end());
    io.out << "weak observer (digits only): length " << weak.length << " revealed; candidates per position stay "
           << weak.candidates_per_position << "; typed digits vs uniform, min p-value over positions "
           << std::setprecision(4) << min_p << '\n';
  }
  return kExitOk;
}

struct CrosscheckFlags {
  std::vector<std::size_t> sizes{10, 20};
  std::size_t max_length = 4;
  std::size_t max_store = 8;
  std::size_t cases = 10'000;
  std::uint64_t seed = 1;
  bool break_tie_break = false;
};

int cmd_crosscheck(const CrosscheckFlags& flags, Io& io) {
  CrosscheckOptions options;
  options.charset_sizes = flags.sizes;
  options.max_length = flags.max_length;
  options.max_store = flags.max_store;
  options.cases = flags.cases;
  options.seed = flags.seed;
  options.break_tie_break = flags.break_tie_break;
  const auto report = crosscheck(options);
  if (report.divergence) {
    io.out << "DIVERGENCE after " << report.cases << " case(s)\n" << describe(*report.divergence);
    return kExitCheckFailed;
  }
  io.out << "ok: " << report.cases << " cases, " << report.accepted << " accepted, " << report.collisions
         << " with colliding passwords; naive and inverted agree\n";
  return kExitOk;
}

struct ServeFlags {
  std::optional<std::string> config;
  std::optional<std::string> listen;
  std::optional<std::string> store;
  std::optional<std::string> web_root;
};

int cmd_serve(const ServeFlags& flags, Io& io) {
  ServiceConfig config = load_service_config(flags.config ? std::optional<std::filesystem::path>(*flags.config)
                                                          : std::nullopt);
  if (flags.listen) apply_listen(config, *flags.listen);
  if (flags.store) config.store_path = *flags.store;
  if (flags.web_root) config.web_root = *flags.web_root;

  auto store = StoreHandle::open(config.store_path, charset_by_id(config.charset));
  AuthService service(store, config);
  HttpServer server(service);
  const int port = server.bind(config.host, config.port);
  if (port < 0) {
    io.err << "error: cannot bind " << config.host << ':' << config.port << '\n';
    return kExitIoError;
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::atomic<bool> signalled{false};
  std::jthread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    signalled = true;
    server.stop();
  });

  io.out << "listening on " << config.host << ':' << port << " with " << store->snapshot()->size()
         << " stored credential(s)" << std::endl;
  server.listen();
  // Wake the waiter if the server stopped on its own.
  if (!signalled) pthread_kill(waiter.native_handle(), SIGTERM);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, Io io) {
  CLI::App app{"gridpass: coded-grid password login tooling"};
  app.require_subcommand(1);

  StoreFlags store_flags;
  std::string mode = "password-only";
  bool force = false;
  auto* init_db = app.add_subcommand("init-db", "Create an empty credential store");
  add_store_option(init_db, store_flags);
  init_db->add_option("--mode", mode, "password-only or username-scoped")
      ->check(CLI::IsMember({"password-only", "username-scoped"}))
      ->capture_default_str();
  init_db->add_flag("--force", force, "Overwrite an existing file");

  std::optional<std::string> username;
  auto* add_user = app.add_subcommand("add-user", "Add a password (read from the terminal or stdin)");
  add_store_option(add_user, store_flags);
  add_user->add_option("--username", username, "Username (username-scoped stores)");

  auto* remove_user = app.add_subcommand("remove-user", "Remove a user, or a password read from stdin");
  add_store_option(remove_user, store_flags);
  remove_user->add_option("--username", username, "Username to remove");

  bool list_json = false;
  auto* list_users = app.add_subcommand("list-users", "List stored records with masked passwords");
  add_store_option(list_users, store_flags);
  list_users->add_flag("--json", list_json, "Machine-readable output");

  DemoFlags demo;
  auto* demo_grid = app.add_subcommand("demo-grid", "Print a login grid over the default charset");
  demo_grid->add_option("--seed", demo.seed, "Deterministic grid from this seed");
  demo_grid->add_option("--fixture", demo.fixture, "Use the fixed reference grid (reference, alias fig2)");
  demo_grid->add_option("--encode", demo.encode, "Also print the digits for this password");
  demo_grid->add_flag("--json", demo.json, "Machine-readable output");

  AttackFlags attack;
  auto* simulate = app.add_subcommand("simulate-attack", "Monte Carlo of an observer intersecting candidate sets");
  simulate->add_option("--k", attack.k, "Observed sessions (rows k = 1..K)")->check(CLI::Range(1, 64))->capture_default_str();
  simulate->add_option("--trials", attack.trials, "Monte Carlo trials")->check(CLI::Range(2, 100'000'000))->capture_default_str();
  auto* pw_opt = simulate->add_option("--password", attack.password, "Fixed password to observe");
  simulate->add_option("--random-length", attack.random_length, "Random password length per trial")
      ->check(CLI::Range(1, 255))
      ->excludes(pw_opt)
      ->capture_default_str();
  simulate->add_option("--seed", attack.seed, "RNG seed")->capture_default_str();
  simulate->add_option("--threads", attack.threads, "Worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  simulate->add_option("--csv", attack.csv, "Write k,mean_survivors,closed_form,stderr to this file");
  simulate->add_flag("--weak", attack.weak, "Also simulate an observer who never sees the grid");

  CrosscheckFlags cross;
  auto* crosscheck_cmd = app.add_subcommand("crosscheck", "Compare the naive and inverted verifiers on random cases");
  crosscheck_cmd->add_option("--charset-size", cross.sizes, "Charset sizes to draw from (multiples of 10, <= 20)")
      ->check(CLI::IsMember({10, 20}))
      ->capture_default_str();
  crosscheck_cmd->add_option("--max-length", cross.max_length, "Longest digit string")->check(CLI::Range(1, 4))->capture_default_str();
  crosscheck_cmd->add_option("--max-store", cross.max_store, "Largest store")->check(CLI::Range(0, 8))->capture_default_str();
  crosscheck_cmd->add_option("--cases", cross.cases, "Number of cases")->capture_default_str();
  crosscheck_cmd->add_option("--seed", cross.seed, "RNG seed")->capture_default_str();
  crosscheck_cmd->add_flag("--break-tie-break", cross.break_tie_break, "Harness self-test: sabotage the tie-break");

  ServeFlags serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP login service");
  serve_cmd->add_option("--config", serve.config, "JSON config file");
  serve_cmd->add_option("--listen", serve.listen, "host:port (overrides config)");
  serve_cmd->add_option("--store", serve.store, "Credential store (overrides config)");
  serve_cmd->add_option("--web-root", serve.web_root, "Static files to serve at /");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    io.out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    io.out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitUserError;
  }

  try {
    if (*init_db) return cmd_init_db(store_flags, mode, force, io);
    if (*add_user) return cmd_add_user(store_flags, username, io);
    if (*remove_user) return cmd_remove_user(store_flags, username, io);
    if (*list_users) return cmd_list_users(store_flags, list_json, io);
    if (*demo_grid) return cmd_demo_grid(demo, io);
    if (*simulate) return cmd_simulate_attack(attack, io);
    if (*crosscheck_cmd) return cmd_crosscheck(cross, io);
    if (*serve_cmd) return cmd_serve(serve, io);
  } catch (const Error& e) {
    io.err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::system_error& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitIoError;
  }
  return kExitUserError;
}

}  // namespace gridpass::cli
