#include "ucqlab/database.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

namespace ucq {

Value ConstantPool::intern(std::string_view text) {
  std::string key(text);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  Value id = static_cast<Value>(names_.size());
  names_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

std::optional<Value> ConstantPool::find(std::string_view text) const {
  auto it = ids_.find(std::string(text));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

bool Relation::insert(std::span<const Value> t) {
  if (t.size() != arity()) throw DatabaseError("tuple arity does not match relation arity");
  return table_.insert(t).second;
}

GroupIndex Relation::index_on(std::vector<std::size_t> columns) const {
  std::vector<std::uint32_t> rows(size());
  for (std::uint32_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return GroupIndex::build(table_, rows, std::move(columns));
}

Relation& Database::add_relation(const std::string& name, std::size_t arity) {
  auto it = relations_.find(name);
  if (it != relations_.end()) {
    if (it->second.arity() != arity) {
      throw DatabaseError("relation " + name + " has arity " + std::to_string(it->second.arity()) +
                          ", not " + std::to_string(arity));
    }
    return it->second;
  }
  return relations_.emplace(name, Relation(arity)).first->second;
}

const Relation* Database::find(const std::string& name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

Relation* Database::find(const std::string& name) {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

Tuple Database::intern_tuple(const std::vector<std::string>& values) {
  Tuple t;
  t.reserve(values.size());
  for (const auto& v : values) t.push_back(pool_.intern(v));
  return t;
}

bool Database::insert(const std::string& relation, const std::vector<std::string>& values) {
  Relation& r = add_relation(relation, values.size());
  return r.insert(intern_tuple(values));
}

std::size_t Database::total_tuples() const {
  std::size_t n = 0;
  for (const auto& [name, r] : relations_) n += r.size();
  return n;
}

std::vector<std::string> Database::decode(const Tuple& t) const {
  std::vector<std::string> out;
  for (Value v : t) out.push_back(pool_.name(v));
  return out;
}

namespace {

// RFC 4180 fields on one line: a field starting with '"' runs to the closing
// quote, with "" standing for a literal quote.
std::optional<std::vector<std::string>> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::size_t i = 0;
  while (true) {
    if (i < line.size() && line[i] == '"') {
      ++i;
      for (;; ++i) {
        if (i >= line.size()) return std::nullopt;
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            cur.push_back('"');
            ++i;
          } else {
            ++i;
            break;
          }
        } else {
          cur.push_back(line[i]);
        }
      }
      if (i < line.size() && line[i] != ',') return std::nullopt;
    } else {
      while (i < line.size() && line[i] != ',') cur.push_back(line[i++]);
    }
    fields.push_back(std::move(cur));
    cur.clear();
    if (i >= line.size()) return fields;
    ++i;  // comma
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::map<std::string, std::size_t> read_manifest(const std::filesystem::path& file) {
  std::map<std::string, std::size_t> out;
  std::ifstream in(file);
  if (!in) throw DatabaseError("cannot read " + file.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DatabaseError(file.string() + ":" + std::to_string(lineno) + ": expected `name = arity`");
    }
    std::string name = trim(line.substr(0, eq));
    if (name.size() >= 2 && name.front() == '"' && name.back() == '"') name = name.substr(1, name.size() - 2);
    try {
      out[name] = std::stoul(trim(line.substr(eq + 1)));
    } catch (const std::exception&) {
      throw DatabaseError(file.string() + ":" + std::to_string(lineno) + ": bad arity");
    }
  }
  return out;
}

}  // namespace

Database load_database(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DatabaseError("not a database directory: " + dir.string());
  Database d;
  std::map<std::string, std::size_t> declared;
  if (fs::exists(dir / "db.toml")) declared = read_manifest(dir / "db.toml");
  for (const auto& [name, arity] : declared) d.add_relation(name, arity);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  for (const auto& file : files) {
    const std::string name = file.stem().string();
    std::ifstream in(file);
    if (!in) throw DatabaseError("cannot read " + file.string());
    Relation* rel = d.find(name);
    std::string line;
    std::size_t lineno = 0;
    Tuple t;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto parsed = split_csv(line);
      if (!parsed) throw DatabaseError(file.string() + ":" + std::to_string(lineno) + ": unbalanced quotes");
      auto& fields = *parsed;
      if (rel == nullptr) rel = &d.add_relation(name, fields.size());
      if (fields.size() != rel->arity()) {
        throw DatabaseError(file.string() + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(rel->arity()) + " fields, found " +
                            std::to_string(fields.size()));
      }
      t.clear();
      for (const auto& f : fields) t.push_back(d.pool().intern(f));
      rel->insert(t);
    }
  }
  return d;
}

void save_database(const Database& d, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ofstream manifest(dir / "db.toml");
  if (!manifest) throw DatabaseError("cannot write " + (dir / "db.toml").string());
  manifest << "[arities]\n";
  for (const auto& [name, rel] : d.relations()) {
    manifest << name << " = " << rel.arity() << "\n";
    std::ofstream out(dir / (name + ".csv"));
    if (!out) throw DatabaseError("cannot write " + (dir / (name + ".csv")).string());
    for (std::size_t i = 0; i < rel.size(); ++i) out << format_csv_row(d, rel.tuple(i)) << "\n";
  }
}

std::string format_csv_row(const Database& d, const Tuple& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += csv_field(d.pool().name(t[i]));
  }
  return out;
}

}  // namespace ucq
