#include "mslab/cli/output.hpp"

#include "mslab/cli/config.hpp"

namespace mslab::cli {
namespace {

void check(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

RunContext write_manifest(const std::filesystem::path& out_dir, const std::string& canonical) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  RunContext ctx{out_dir, content_hash(canonical)};
  const auto path = out_dir / "manifest.txt";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << "# mslab " << kToolVersion << " run manifest\n"
      << canonical << "manifest_hash = " << ctx.manifest_hash << '\n';
  check(out, path);
  return ctx;
}

std::string Cell::str() const {
  if (const auto* d = std::get_if<double>(&v_)) return format_real(*d);
  if (const auto* i = std::get_if<std::int64_t>(&v_)) return std::to_string(*i);
  if (const auto* u = std::get_if<std::uint64_t>(&v_)) return std::to_string(*u);
  return std::get<std::string>(v_);
}

std::ofstream open_output(const RunContext& ctx, const std::string& name,
                          std::filesystem::path* path) {
  const auto p = ctx.out_dir / name;
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot open " + p.string());
  out << "# mslab " << kToolVersion << '\n' << "# manifest " << ctx.manifest_hash << '\n';
  if (path) *path = p;
  return out;
}

CsvWriter::CsvWriter(const RunContext& ctx, const std::string& name,
                     std::vector<std::string> columns, const std::vector<std::string>& notes)
    : out_(open_output(ctx, name, &path_)), n_columns_(columns.size()) {
  for (const auto& n : notes) out_ << "# " << n << '\n';
  std::string header;
  for (const auto& c : columns) header += (header.empty() ? "" : ",") + c;
  out_ << "# columns " << header << '\n' << header << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != n_columns_) {
    throw ShapeError(path_.string() + ": row has " + std::to_string(cells.size()) +
                     " cells, expected " + std::to_string(n_columns_));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i].str();
  }
  out_ << '\n';
}

void CsvWriter::close() { check(out_, path_); }

Report::Report(const RunContext& ctx, const std::string& name)
    : out_(open_output(ctx, name, &path_)) {
  out_ << "# columns key = value\n";
}

void Report::add(const std::string& key, const Cell& value) {
  out_ << key << " = " << value.str() << '\n';
}

void Report::section(const std::string& title) { out_ << "[" << title << "]\n"; }

void Report::close() { check(out_, path_); }

}  // namespace mslab::cli
