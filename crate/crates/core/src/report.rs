use std::fmt;

/// The axiom or law a violation was found against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Reflexive,
    Antisymmetric,
    Transitive,
    ComposeDomain,
    Associativity,
    IdentityLaw,
    InverseLaw,
    ObjectOrderAgreement,
    OG1,
    OG2,
    OG3Existence,
    OG3Uniqueness,
    FunctorIdentity,
    FunctorEndpoints,
    FunctorInverse,
    FunctorComposition,
    FunctorOrder,
    Naturality,
    Wide,
    SubgroupoidClosure,
    RestrictionClosure,
    Conjugation,
    OrderIdeal,
    Full,
    Connected,
    ActionDefined,
    ActionTarget,
    ActionComposite,
    ActionFunctorial,
    ActionIdentity,
    ActionOrder,
    Inverse,
    IdempotentsCommute,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One failed axiom with the first witness found for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<u32>,
    pub detail: String,
}

/// Outcome of an exhaustive axiom scan. Only the first witness per axiom
/// is kept, so `violations` has at most one entry per [`Axiom`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn first(&self, axiom: Axiom) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }

    /// Records a violation unless one for the same axiom is already present.
    pub fn record(&mut self, axiom: Axiom, witness: &[u32], detail: impl Into<String>) {
        if !self.has(axiom) {
            self.violations.push(Violation {
                axiom,
                witness: witness.to_vec(),
                detail: detail.into(),
            });
        }
    }

    pub fn merge(&mut self, other: ValidationReport) {
        for v in other.violations {
            if !self.has(v.axiom) {
                self.violations.push(v);
            }
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "passed");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{} {:?} ({})", v.axiom, v.witness, v.detail))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}
