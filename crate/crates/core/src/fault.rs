//! Fault injection hooks used by the verification suite to prove that its
//! checks are able to fail.
//!
//! A fault is installed per thread with [`with_fault`]; core operations
//! consult [`active`] at a handful of well-defined points. With no fault
//! installed every hook is a no-op.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

/// A deliberate corruption of one core operation or fixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Subalgebra closure stops after one round of products.
    ClosureSinglePass,
    /// Subalgebra closure forgets the distinguished constants.
    ClosureNoConstants,
    /// Pullbacks keep every pair of the product.
    PullbackDropsCheck,
    /// Every point is classified weakly Schreier.
    WeaklySchreierAlwaysTrue,
    /// Schreier degenerates to weakly Schreier (injectivity of `k -> k.s(y)` skipped).
    SchreierDropsInjectivity,
    /// Puncturing predicates use the right translation `t -> t <| s(y)`.
    PuncturingMirrored,
    /// Strongly split only tests the full subalgebra `Y' = Y`.
    StronglySplitTopOnly,
    /// Torsor twist returns the torsor unchanged.
    TwistIdentity,
    /// Baer-sum congruence uses `q1(x1,x2) = q2(x1',x2')`.
    BaerSignFlip,
    /// Kernel pairs omit the pairs `(a, b)` with `a > b`.
    KernelPairHalf,
    /// Connector propagation stops after the forced values.
    ConnectorNoPropagation,
    /// Relational composition intersects instead of composing.
    ComposeIntersects,
    /// Congruence quotients send the largest element of each class to class 0.
    QuotientMisroutes,
    /// Hom checks and searches ignore the distinguished constants.
    HomIgnoresConstants,
    /// Centralizer returns the first centralizing congruence found.
    CentralizerFirstFound,
    /// Regular-pushout comparison maps are assumed surjective.
    RegularPushoutAssumed,
    /// Direct images keep only diagonal pairs.
    DirectImageDiagonal,
    /// The simplicial-kernel factorization is assumed bijective.
    SimplicialAssumedIso,
    /// One cell of the cyclic-group fixtures is overwritten; the payload seeds the choice.
    FixtureCell(u64),
}

/// The seeded mutations exercised by the suite: every operation fault plus
/// two fixture corruptions.
pub const SEEDED: [Fault; 20] = [
    Fault::ClosureSinglePass,
    Fault::ClosureNoConstants,
    Fault::PullbackDropsCheck,
    Fault::WeaklySchreierAlwaysTrue,
    Fault::SchreierDropsInjectivity,
    Fault::PuncturingMirrored,
    Fault::StronglySplitTopOnly,
    Fault::TwistIdentity,
    Fault::BaerSignFlip,
    Fault::KernelPairHalf,
    Fault::ConnectorNoPropagation,
    Fault::ComposeIntersects,
    Fault::QuotientMisroutes,
    Fault::HomIgnoresConstants,
    Fault::CentralizerFirstFound,
    Fault::RegularPushoutAssumed,
    Fault::DirectImageDiagonal,
    Fault::SimplicialAssumedIso,
    Fault::FixtureCell(1),
    Fault::FixtureCell(7),
];

thread_local! {
    static ACTIVE: Cell<Option<Fault>> = const { Cell::new(None) };
}

/// Runs `body` with `fault` installed on the current thread.
pub fn with_fault<T>(fault: Option<Fault>, body: impl FnOnce() -> T) -> T {
    let previous = ACTIVE.with(|c| c.replace(fault));
    struct Restore(Option<Fault>);
    impl Drop for Restore {
        fn drop(&mut self) {
            ACTIVE.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(previous);
    body()
}

#[inline]
pub fn active(fault: Fault) -> bool {
    ACTIVE.with(|c| c.get() == Some(fault))
}

/// The installed fault, if any.
pub fn current() -> Option<Fault> {
    ACTIVE.with(|c| c.get())
}
