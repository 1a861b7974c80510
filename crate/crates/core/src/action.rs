use serde::{Deserialize, Serialize};

/// Supported compact automorphism groups acting on the complex coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ActionKind {
    /// The full unitary group; invariants are radial.
    UnitaryFull,
    /// The diagonal torus; invariants are polyradial.
    Torus,
}

/// A supported action together with the complex dimension n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActionDescriptor {
    pub kind: ActionKind,
    pub n: usize,
}

impl ActionDescriptor {
    pub fn unitary(n: usize) -> Self {
        assert!(n >= 1);
        ActionDescriptor { kind: ActionKind::UnitaryFull, n }
    }

    pub fn torus(n: usize) -> Self {
        assert!(n >= 1);
        ActionDescriptor { kind: ActionKind::Torus, n }
    }

    /// Number of reduced radial coordinates (1 for radial, n for polyradial).
    pub fn reduced_dim(&self) -> usize {
        match self.kind {
            ActionKind::UnitaryFull => 1,
            ActionKind::Torus => self.n,
        }
    }

    /// Number of Hilbert-basis generators d (= reduced_dim for these actions).
    pub fn generator_count(&self) -> usize {
        self.reduced_dim()
    }
}

impl std::fmt::Display for ActionDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            ActionKind::UnitaryFull => write!(f, "un:{}", self.n),
            ActionKind::Torus => write!(f, "torus:{}", self.n),
        }
    }
}

impl std::str::FromStr for ActionDescriptor {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, n) = s
            .split_once(':')
            .ok_or_else(|| crate::error::Error::Parse(format!("bad group spec `{s}`")))?;
        let n: usize = n
            .parse()
            .map_err(|_| crate::error::Error::Parse(format!("bad dimension in `{s}`")))?;
        if n == 0 {
            return Err(crate::error::Error::Parse("dimension must be >= 1".into()));
        }
        match kind {
            "un" | "u" => Ok(ActionDescriptor::unitary(n)),
            "torus" | "t" => Ok(ActionDescriptor::torus(n)),
            _ => Err(crate::error::Error::Parse(format!("unknown group kind `{kind}`"))),
        }
    }
}
