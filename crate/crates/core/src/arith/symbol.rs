use std::fmt;

/// Number of symbols in the closed universe.
pub const NSYM: usize = 12;

/// The fixed symbol universe. Declaration order is the variable order used by
/// the graded lexicographic monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Alpha,
    Beta,
    Gamma,
    Omega,
    K,
    Lambda,
    A0,
    A1,
    A2,
    B1,
    B2,
    /// The algebraic constant `2α + β + √((2α+β)² − 40γω)`.
    A,
}

impl Symbol {
    pub const ALL: [Symbol; NSYM] = [
        Symbol::Alpha,
        Symbol::Beta,
        Symbol::Gamma,
        Symbol::Omega,
        Symbol::K,
        Symbol::Lambda,
        Symbol::A0,
        Symbol::A1,
        Symbol::A2,
        Symbol::B1,
        Symbol::B2,
        Symbol::A,
    ];

    /// The equation coefficients α, β, γ, ω.
    pub const PARAMETERS: [Symbol; 4] = [Symbol::Alpha, Symbol::Beta, Symbol::Gamma, Symbol::Omega];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::Alpha => "alpha",
            Symbol::Beta => "beta",
            Symbol::Gamma => "gamma",
            Symbol::Omega => "omega",
            Symbol::K => "k",
            Symbol::Lambda => "lambda",
            Symbol::A0 => "a0",
            Symbol::A1 => "a1",
            Symbol::A2 => "a2",
            Symbol::B1 => "b1",
            Symbol::B2 => "b2",
            Symbol::A => "A",
        }
    }

    pub fn from_name(name: &str) -> Option<Symbol> {
        Symbol::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn is_parameter(self) -> bool {
        Symbol::PARAMETERS.contains(&self)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
