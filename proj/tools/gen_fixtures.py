#!/usr/bin/env python3
"""Regenerate the FCIDUMP fixtures and their JSON sidecars with PySCF.

Each fixture is written as <name>.fcidump plus <name>.json holding the RHF
energy, the FCI spectrum of the N-electron sector (all spin projections),
the MO coefficients and the AO overlap matrix. The spectrum is computed by
PySCF's determinant FCI solver, independently of the qubit pipeline.

    python3 tools/gen_fixtures.py fixtures/
"""
import json
import sys
from pathlib import Path

import numpy as np
from pyscf import fci, gto, scf
from pyscf.tools import fcidump


def s_only(element):
    return [shell for shell in gto.basis.load("sto-3g", element) if shell[0] == 0]


def fci_spectrum(mf):
    mol = mf.mol
    norb = mf.mo_coeff.shape[1]
    nelec = mol.nelectron
    h1 = mf.mo_coeff.T @ mf.get_hcore() @ mf.mo_coeff
    from pyscf import ao2mo
    eri = ao2mo.restore(1, ao2mo.kernel(mol, mf.mo_coeff), norb)
    energies = []
    for na in range(max(0, nelec - norb), min(norb, nelec) + 1):
        nb = nelec - na
        from math import comb
        dim = comb(norb, na) * comb(norb, nb)
        solver = fci.direct_spin1.FCI()
        solver.conv_tol = 1e-12
        if dim <= 400:
            h = fci.direct_spin1.pspace(h1, eri, norb, (na, nb), np=dim)[1]
            e = np.linalg.eigvalsh(h)
        else:
            e, _ = solver.kernel(h1, eri, norb, (na, nb), nroots=min(dim, 40))
            e = np.atleast_1d(e)
        energies.extend((np.asarray(e) + mol.energy_nuc()).tolist())
    return sorted(energies)


def write_fixture(out_dir, name, atom, basis, meta, spectrum=True):
    mol = gto.M(atom=atom, basis=basis, symmetry=True, unit="Angstrom", verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.run()
    fcidump.from_scf(mf, str(out_dir / f"{name}.fcidump"), tol=1e-12)
    side = dict(meta)
    side.update(
        {
            "n_orbitals": int(mf.mo_coeff.shape[1]),
            "n_electrons": int(mol.nelectron),
            "nuclear_repulsion": float(mol.energy_nuc()),
            "hf_energy": float(mf.e_tot),
            "mo_coeff": mf.mo_coeff.tolist(),
            "overlap": mol.intor("int1e_ovlp").tolist(),
            "generator": "pyscf " + __import__("pyscf").__version__,
        }
    )
    if spectrum:
        side["fci_spectrum"] = fci_spectrum(mf)
    (out_dir / f"{name}.json").write_text(json.dumps(side, indent=1))


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
    (out / "h2").mkdir(parents=True, exist_ok=True)
    (out / "lih_s").mkdir(parents=True, exist_ok=True)
    (out / "groups").mkdir(parents=True, exist_ok=True)

    for r in np.linspace(0.3, 2.5, 21):
        write_fixture(out / "h2", f"h2_{r:.2f}", f"H 0 0 0; H 0 0 {r}", "sto-3g",
                      {"molecule": "H2", "basis": "sto-3g", "bond_length": round(float(r), 4)})

    lih_s = {"Li": s_only("Li"), "H": "sto-3g"}
    for r in np.linspace(0.9, 3.0, 21):
        write_fixture(out / "lih_s", f"lih_s_{r:.3f}", f"Li 0 0 0; H 0 0 {r}", lih_s,
                      {"molecule": "LiH", "basis": "sto-3g, s shells only", "bond_length": round(float(r), 4)})

    beh2_s = {"Be": s_only("Be"), "H": "sto-3g"}
    groups = [
        ("h2_sto3g", "H 0 0 0; H 0 0 0.74", "sto-3g", "H2", True),
        ("lih_s", "Li 0 0 0; H 0 0 1.6", lih_s, "LiH", True),
        ("lih_sto3g", "Li 0 0 0; H 0 0 1.6", "sto-3g", "LiH", False),
        ("beh2_s", "Be 0 0 0; H 0 0 1.33; H 0 0 -1.33", beh2_s, "BeH2", True),
        ("beh2_sto3g", "Be 0 0 0; H 0 0 1.33; H 0 0 -1.33", "sto-3g", "BeH2", False),
        ("h2o_sto3g", "O 0 0 0; H 0.757 0.586 0; H -0.757 0.586 0", "sto-3g", "H2O", False),
    ]
    for name, atom, basis, molecule, spec in groups:
        write_fixture(out / "groups", name, atom, basis,
                      {"molecule": molecule, "basis": str(basis) if isinstance(basis, str) else "sto-3g, s shells only"},
                      spectrum=spec)


if __name__ == "__main__":
    main()
