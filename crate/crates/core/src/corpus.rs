//! Reference specifications with hand-derived winners.

use crate::error::Result;
use crate::predicate::UpPredicate;
use crate::solver::Player;
use crate::spec::SpecFile;

pub struct Entry {
    pub name: &'static str,
    pub text: &'static str,
    /// Parameter literal, overriding any `param` line.
    pub param: &'static str,
    pub winner: Player,
}

pub const COPY: &str = "formula: all t. in(Y,t) <-> in(X,t)\ninput: X\noutput: Y\nparam P = ;0\n";

pub const PREDICT: &str =
    "formula: all t. in(Y,t) <-> in(X,t+1)\ninput: X\noutput: Y\nparam P = ;0\n";

pub const PSI_BETA: &str = "\
define B = ex t. in(P,t)
define Yis0 = Y = {0}
define Xempty = X = {}
formula: (B -> Yis0) & (~B -> Xempty)
input: X
output: Y
param P = 1;0
";

const DELAY: &str = "formula: all t. in(Y,t+1) <-> in(X,t)\ninput: X\noutput: Y\n";

const FOLLOW_P: &str = "formula: all t. in(Y,t) <-> in(P,t)\ninput: X\noutput: Y\nparam P = ;0\n";

const MASK_BY_P: &str =
    "formula: all t. in(Y,t) <-> in(X,t) & in(P,t)\ninput: X\noutput: Y\nparam P = ;0\n";

const PREDICT_ON_P: &str =
    "formula: all t. in(P,t) -> (in(Y,t) <-> in(X,t+1))\ninput: X\noutput: Y\nparam P = ;0\n";

const ANTI_PREDICT: &str = "formula: all t. in(Y,t) <-> ~in(X,t+1)\ninput: X\noutput: Y\n";

const XOR_PREVIOUS: &str = "\
formula: (in(Y,0) <-> in(X,0)) & all t. (in(Y,t+1) <-> ~(in(X,t) <-> in(X,t+1)))
input: X
output: Y
";

/// Y ⊆ X, and Y is infinite whenever X is.
const FAIR_SUBSET: &str = "\
define InfX = all t. ex s. t < s & in(X,s)
define InfY = all t. ex s. t < s & in(Y,s)
formula: (all t. in(Y,t) -> in(X,t)) & (InfX -> InfY)
input: X
output: Y
";

/// Y never has two consecutive ones and is infinite if X is.
const SPARSE_RESPONSE: &str = "\
define InfX = all t. ex s. t < s & in(X,s)
define InfY = all t. ex s. t < s & in(Y,s)
formula: (all t. ~(in(Y,t) & in(Y,t+1))) & (InfX -> InfY)
input: X
output: Y
";

/// Y must eventually stay equal to X from some point on: II copies.
const EVENTUAL_COPY: &str =
    "formula: ex d. all t. d < t -> (in(Y,t) <-> in(X,t))\ninput: X\noutput: Y\n";

/// Y must be finite exactly when X is.
const FINITE_IFF: &str = "\
define FinX = ex d. all t. d < t -> ~in(X,t)
define FinY = ex d. all t. d < t -> ~in(Y,t)
formula: FinY <-> FinX
input: X
output: Y
";

pub fn entries() -> Vec<Entry> {
    use Player::{I, II};
    let e = |name, text, param, winner| Entry {
        name,
        text,
        param,
        winner,
    };
    vec![
        e("copy", COPY, ";0", II),
        e("copy", COPY, "1;0", II),
        e("copy", COPY, ";1", II),
        e("predict", PREDICT, ";0", I),
        e("predict", PREDICT, "01;10", I),
        e("psi-beta", PSI_BETA, "1;0", II),
        e("psi-beta", PSI_BETA, ";0", I),
        e("delay", DELAY, ";0", II),
        e("follow-p", FOLLOW_P, "01;10", II),
        e("mask-by-p", MASK_BY_P, "1;01", II),
        e("predict-on-p", PREDICT_ON_P, ";0", II),
        e("predict-on-p", PREDICT_ON_P, "0;1", I),
        e("anti-predict", ANTI_PREDICT, ";1", I),
        e("xor-previous", XOR_PREVIOUS, ";0", II),
        e("fair-subset", FAIR_SUBSET, ";0", II),
        e("sparse-response", SPARSE_RESPONSE, "1;0", II),
        e("eventual-copy", EVENTUAL_COPY, ";0", II),
        e("finite-iff", FINITE_IFF, ";0", II),
    ]
}

impl Entry {
    /// The parsed specification with this entry's parameter bound.
    pub fn spec(&self) -> Result<SpecFile> {
        let mut s = SpecFile::parse(self.text)?;
        let p: UpPredicate = self.param.parse()?;
        let name = s
            .param
            .as_ref()
            .map_or_else(|| "P".to_string(), |(n, _)| n.clone());
        s.param = Some((name, p));
        Ok(s)
    }

    pub fn label(&self) -> String {
        format!("{} [P={}]", self.name, self.param)
    }
}
