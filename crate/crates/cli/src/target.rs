use std::path::Path;
use std::sync::Arc;

use uproj::adjoint::{self, adjoint_generators, adjoint_projector};
use uproj::genrep::{self, rep_projector, RepConstruction, RepFile, RepInput};
use uproj::genset::GeneratorSet;
use uproj::groupconj::{self, conj_projector, MatrixAlgebra};
use uproj::liealg::ChevalleyBasis;
use uproj::projector_core::{Derivation, Projector};
use uproj::rootsystem::RootSystem;
use uproj::symfield::{universe, DenominatorSet, PoissonStructure};

use crate::{parse_series, CliError, Result, UniverseArgs};

/// The three supported actions, each with its own coordinate universe.
pub enum Target {
    Adjoint(ChevalleyBasis),
    Rep(RepInput),
    Conj(MatrixAlgebra),
}

impl Target {
    pub fn adjoint(rs: &RootSystem) -> Result<Self> {
        Ok(Target::Adjoint(ChevalleyBasis::new(rs)?))
    }

    pub fn rep(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let file: RepFile = serde_json::from_str(&src)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Ok(Target::Rep(RepInput::from_file(&file)?))
    }

    pub fn conj(n: usize) -> Result<Self> {
        Ok(Target::Conj(MatrixAlgebra::new(n)?))
    }

    pub fn from_args(u: &UniverseArgs) -> Result<Self> {
        match (&u.series, u.rank, u.n, &u.file) {
            (Some(s), Some(r), None, None) => Target::adjoint(&RootSystem::new(parse_series(s)?, r)?),
            (None, None, Some(n), None) => Target::conj(n),
            (None, None, None, Some(f)) => Target::rep(f),
            _ => Err(CliError::Usage("give one of --type/--rank, --n or --file".into())),
        }
    }

    /// Polynomial universe with no denominators declared.
    pub fn plain_universe(&self) -> Arc<DenominatorSet> {
        match self {
            Target::Adjoint(b) => universe(b),
            Target::Rep(r) => DenominatorSet::new(r.coords().to_vec()),
            Target::Conj(a) => a.universe().clone(),
        }
    }

    /// Derivations of the simple root vectors.
    pub fn family(&self) -> Vec<Derivation> {
        match self {
            Target::Adjoint(b) => {
                let rs = b.root_system();
                let poisson = PoissonStructure::new(b);
                (0..rs.rank())
                    .map(|i| {
                        let e = b.e(rs.positive_index(&rs.simple_root(i)).expect("simple"));
                        Derivation::new(b.symbol(e), poisson.hamiltonian_images(e).to_vec())
                    })
                    .collect()
            }
            Target::Rep(r) => r.simple_derivations(),
            Target::Conj(a) => a.simple_derivations(),
        }
    }

    pub fn projector(&self) -> Result<Projector> {
        Ok(match self {
            Target::Adjoint(b) => adjoint_projector(b)?.1,
            Target::Rep(r) => RepConstruction::new(r)?.projector()?,
            Target::Conj(a) => a.projector()?,
        })
    }

    pub fn generators(&self, iter_cap: Option<usize>, trials: usize, seed: u64) -> Result<GeneratorSet> {
        Ok(match self {
            Target::Adjoint(b) => {
                let opts = adjoint::Options { iter_cap, trials, seed, check: true };
                adjoint_generators(b, &opts)?
            }
            Target::Rep(r) => {
                let opts = genrep::Options { iter_cap, trials, seed, check: true };
                rep_projector(r, &opts)?.1
            }
            Target::Conj(a) => {
                let opts = groupconj::Options { iter_cap, trials, seed, check: true };
                conj_projector(a.n(), &opts)?.1
            }
        })
    }
}
