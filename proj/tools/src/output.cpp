#include "bohmsim/output.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "bohmsim/scenario.hpp"

namespace bohmsim {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream f(path, mode | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void write_columns(const fs::path& path, const std::string& title,
                   const std::vector<std::pair<std::string, std::string>>& meta, const std::vector<Column>& columns) {
  auto f = open_out(path);
  f << "# " << title << "\n";
  f << "# format: " << kFieldFormat << "\n";
  for (const auto& [k, v] : meta) f << "# " << k << ": " << v << "\n";
  f << "# columns:";
  for (const auto& c : columns) f << " " << c.name << "[" << c.unit << "]";
  f << "\n";
  const std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) f << ' ';
      f << format_double(columns[c].values[r]);
    }
    f << '\n';
  }
}

void write_mbw1(const fs::path& path, const bohm::WignerField& F) {
  auto f = open_out(path, std::ios::out | std::ios::binary);
  f.write("MBW1", 4);
  put_u64(f, F.nx());
  put_u64(f, F.np());
  for (double v : F.values) put_u64(f, std::bit_cast<std::uint64_t>(v));
}

bohm::WignerField read_mbw1(const fs::path& path, const bohm::PhaseSpaceGrid& grid) {
  std::ifstream f(path, std::ios::binary);
  char magic[4];
  if (!f.read(magic, 4) || std::memcmp(magic, "MBW1", 4) != 0) throw std::runtime_error("not an MBW1 file: " + path.string());
  const std::uint64_t nx = get_u64(f), np = get_u64(f);
  if (nx != grid.xgrid.n || np != grid.pgrid.n) throw std::runtime_error("MBW1 dimensions do not match the grid");
  bohm::WignerField F(grid);
  for (auto& v : F.values) v = std::bit_cast<double>(get_u64(f));
  if (!f) throw std::runtime_error("truncated MBW1 file: " + path.string());
  return F;
}

void write_wigner_text(const fs::path& path, const bohm::WignerField& F, double t) {
  auto f = open_out(path);
  f << "# Wigner quasi-distribution F(x, p)\n";
  f << "# format: " << kFieldFormat << "\n";
  f << "# t: " << format_double(t) << "\n";
  f << "# hbar: " << format_double(F.hbar()) << "\n";
  f << "# nx: " << F.nx() << "\n# np: " << F.np() << "\n";
  f << "# columns: x[length] p[momentum] F[1/(length*momentum)]\n";
  for (std::size_t i = 0; i < F.nx(); ++i)
    for (std::size_t l = 0; l < F.np(); ++l)
      f << format_double(F.x(i)) << ' ' << format_double(F.p(l)) << ' ' << format_double(F.at(i, l)) << '\n';
}

void write_plot_scripts(const fs::path& dir) {
  {
    auto f = open_out(dir / "plot_fields.py");
    f << R"(# Plots every bohm_fields_*.txt in this directory.
import glob, sys
import numpy as np
import matplotlib.pyplot as plt

files = sorted(glob.glob("bohm_fields_*.txt"))
if not files:
    sys.exit("no field files")
fig, ax = plt.subplots(4, 1, sharex=True, figsize=(7, 9))
for name in files:
    d = np.loadtxt(name)
    ok = d[:, 7] == 0
    ax[0].plot(d[:, 0], d[:, 1], label=name)
    ax[1].plot(d[ok, 0], d[ok, 4])
    ax[2].plot(d[ok, 0], d[ok, 5])
    ax[3].plot(d[ok, 0], d[ok, 3])
for a, lab in zip(ax, ["rho", "Q", "P_B", "S"]):
    a.set_ylabel(lab)
ax[-1].set_xlabel("x")
ax[0].legend(fontsize=6)
fig.tight_layout()
fig.savefig("fields.png", dpi=120)
)";
  }
  {
    auto f = open_out(dir / "plot_wigner.py");
    f << R"(# Reads MBW1 files: "MBW1", uint64 nx, uint64 np, nx*np little-endian float64.
import glob, struct
import numpy as np
import matplotlib.pyplot as plt

for name in sorted(glob.glob("*.mbw")):
    with open(name, "rb") as fh:
        assert fh.read(4) == b"MBW1"
        nx, np_ = struct.unpack("<QQ", fh.read(16))
        F = np.frombuffer(fh.read(8 * nx * np_), dtype="<f8").reshape(nx, np_)
    plt.figure()
    lim = abs(F).max()
    plt.imshow(F.T, origin="lower", aspect="auto", cmap="RdBu_r", vmin=-lim, vmax=lim)
    plt.colorbar(label="F")
    plt.xlabel("x index")
    plt.ylabel("p index")
    plt.title(name)
    plt.savefig(name.replace(".mbw", ".png"), dpi=120)
)";
  }
  {
    auto f = open_out(dir / "plot_trajectories.py");
    f << R"(# Plots trajectories.txt (first column t, then one column per kept particle).
import numpy as np
import matplotlib.pyplot as plt

d = np.loadtxt("trajectories.txt")
plt.plot(d[:, 1:], d[:, 0], lw=0.5, color="k")
plt.xlabel("x")
plt.ylabel("t")
plt.savefig("trajectories.png", dpi=120)
)";
  }
}

}  // namespace bohmsim
