"""strata-lab: exact arithmetic for quadratic-form invariants over Q_p,
vertex-lattice incidence, building balls, stratum point counts and
minuscule intersection multiplicities, with independent brute-force
oracles for everything that has a closed form."""

__version__ = "0.1.0"
