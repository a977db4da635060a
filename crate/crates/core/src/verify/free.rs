use rand::seq::index::sample;
use rand::Rng;

use super::gen::{matroid_of, projective_points, sample_rng};
use super::{control, Acc, Control, Mode, Runner, SuiteConfig, VerifyError};
use crate::classify::{falsify, free_shape, free_structure_check, ClassifyError, FreeStructure};
use crate::families::{build_figure, build_named, two_sum, uniform, FamilyTag};
use crate::gfq::{field, Code, FieldSpec};
use crate::matroid::LinearMatroid;

const EXHAUSTIVE_MAX_RANK: usize = 4;
const SAMPLED_MAX_RANK: usize = 16;
/// Largest circuit rank in the ternary round trip.
const TERNARY_MAX_RANK: usize = 5;

pub(crate) struct FreeSuite {
    cfg: SuiteConfig,
    f: &'static FieldSpec,
    points: Vec<(usize, Vec<Vec<Code>>)>,
}

/// The circuit `U_{r,r+1}` over GF(3) with a copy of `U_{2,4}` 2-summed
/// onto each basis element picked by `d_mask`.
pub(crate) fn ternary_tree(r: usize, d_mask: u64) -> LinearMatroid {
    let mut m = build_named(FamilyTag::Circuit { r, q: 3 }).expect("circuit builds");
    for k in (0..r).filter(|k| d_mask >> k & 1 == 1) {
        let labels = (1..=4).map(|i| format!("u{}_{i}", k + 1)).collect();
        let copy = uniform(2, 4, 3).expect("U24").with_labels(labels).expect("four labels");
        m = two_sum(&m, &copy, &format!("b{}", k + 1), &format!("u{}_1", k + 1)).expect("basepoints exist");
    }
    m
}

impl FreeSuite {
    pub(crate) fn new(cfg: &SuiteConfig) -> Result<Self, VerifyError> {
        let f = field(cfg.q as u32).map_err(|e| VerifyError::Config(e.to_string()))?;
        match cfg.q {
            2 => {
                if cfg.min_rank < 2 || cfg.max_rank > SAMPLED_MAX_RANK {
                    return Err(VerifyError::Guard(format!(
                        "binary prop-free takes ranks 2..{SAMPLED_MAX_RANK}"
                    )));
                }
                if cfg.mode == Mode::Exhaustive && cfg.max_rank > EXHAUSTIVE_MAX_RANK {
                    return Err(VerifyError::Guard(format!(
                        "exhaustive binary prop-free is limited to rank {EXHAUSTIVE_MAX_RANK}"
                    )));
                }
            }
            3 => {
                if cfg.min_rank < 2 || cfg.max_rank > TERNARY_MAX_RANK {
                    return Err(VerifyError::Guard(format!(
                        "the ternary round trip takes circuit ranks 2..{TERNARY_MAX_RANK}"
                    )));
                }
            }
            q => return Err(VerifyError::Guard(format!("prop-free takes q in {{2, 3}} (got {q})"))),
        }
        let points = if cfg.q == 2 {
            cfg.rank_range().map(|r| (r, projective_points(f, r))).collect()
        } else {
            Vec::new()
        };
        Ok(FreeSuite {
            cfg: cfg.clone(),
            f,
            points,
        })
    }

    fn points(&self, r: usize) -> &[Vec<Code>] {
        &self.points.iter().find(|p| p.0 == r).expect("rank swept").1
    }

    fn binary(&self, r: usize, index: u64, acc: &mut Acc) {
        let pts = self.points(r);
        let chosen: Vec<usize> = match self.cfg.mode {
            Mode::Exhaustive => {
                if (index.count_ones() as usize) < r {
                    return;
                }
                (0..pts.len()).filter(|j| index >> j & 1 == 1).collect()
            }
            Mode::Sampled => {
                let mut rng = sample_rng(self.cfg.seed, r, index);
                let n = rng.gen_range(r + 1..=pts.len().min(r + 4));
                let mut c = sample(&mut rng, pts.len(), n).into_vec();
                c.sort_unstable();
                c
            }
        };
        let cols = chosen.iter().map(|&j| pts[j].clone()).collect();
        let labels = chosen.iter().map(|&j| format!("p{}", j + 1)).collect();
        let m = matroid_of(self.f, r, cols, labels);
        if m.rank() < r || !m.coloops().is_empty() {
            return;
        }
        acc.examined();
        let free: Vec<usize> = (0..m.len()).filter(|&j| m.is_free(j)).collect();
        let Some(&e) = free.first() else {
            return;
        };
        acc.tally(format!("r{r}.with_free_element"), 1);
        match free_structure_check(&m, m.label(e)) {
            Ok(FreeStructure::BinaryCircuit) => acc.tally(format!("r{r}.circuit"), 1),
            Ok(other) => acc.violate(
                r,
                index,
                falsify(
                    &m,
                    "binary free element",
                    format!("unexpected shape {other:?}"),
                    m.labels_of(&[e]),
                ),
            ),
            Err(ClassifyError::Falsification(fal)) => acc.violate(r, index, *fal),
            Err(other) => acc.violate(
                r,
                index,
                falsify(&m, "binary free element", other.to_string(), m.labels_of(&[e])),
            ),
        }
    }

    fn ternary(&self, r: usize, index: u64, acc: &mut Acc) {
        acc.examined();
        // the last unit at rank 2 is U_{2,4} itself
        if r == 2 && index == 1 << r {
            let m = uniform(2, 4, 3).expect("U24");
            let ok = m.is_free(0) && free_structure_check(&m, "c1").is_ok_and(|s| s == FreeStructure::U24);
            if ok {
                acc.tally("u24", 1);
            } else {
                acc.violate(
                    r,
                    index,
                    falsify(
                        &m,
                        "free element structure",
                        "U_{2,4} not recognized".into(),
                        Vec::new(),
                    ),
                );
            }
            return;
        }
        let d = index.count_ones() as usize;
        let m = ternary_tree(r, index);
        let e = m.index_of("e").expect("circuit has e");
        let bad = |detail: String| falsify(&m, "free element structure", detail, vec!["e".into()]);
        if !m.is_simple() || !m.coloops().is_empty() || m.rank() != r + d {
            acc.violate(
                r,
                index,
                bad(format!("construction has rank {} for {} + {d}", m.rank(), r)),
            );
            return;
        }
        if !m.is_free(e) {
            acc.violate(
                r,
                index,
                bad(format!("e has a circuit of size {:?}", m.girth_through_idx(e))),
            );
            return;
        }
        match free_structure_check(&m, "e") {
            Ok(FreeStructure::TwoSumTree { d: found, circuit }) if found.len() == d && circuit.len() == r + 1 => {
                acc.tally(format!("r{r}.recovered"), 1);
                acc.max("rank", m.rank() as u64);
            }
            Ok(other) => acc.violate(r, index, bad(format!("built with |D| = {d}, recognized {other:?}"))),
            Err(ClassifyError::Falsification(fal)) => acc.violate(r, index, *fal),
            Err(other) => acc.violate(r, index, bad(other.to_string())),
        }
    }
}

impl Runner for FreeSuite {
    fn units(&self) -> Vec<(usize, u64)> {
        self.cfg
            .rank_range()
            .map(|r| match (self.cfg.q, self.cfg.mode) {
                (3, _) => (r, (1u64 << r) + (r == 2) as u64),
                (_, Mode::Exhaustive) => (r, 1u64 << self.points(r).len()),
                (_, Mode::Sampled) => (r, self.cfg.samples),
            })
            .collect()
    }

    fn run(&self, r: usize, index: u64, acc: &mut Acc) {
        if self.cfg.q == 3 {
            self.ternary(r, index, acc);
        } else {
            self.binary(r, index, acc);
        }
    }

    fn controls(&self, _acc: &mut Acc) -> Vec<Control> {
        let caught = |m: &LinearMatroid, e: &str| match free_shape(m, e) {
            Err(ClassifyError::Falsification(_)) => "violation",
            _ => "none",
        };
        let (name, observed) = if self.cfg.q == 2 {
            let m4 = build_figure(FamilyTag::M(4)).expect("M4 builds");
            ("shape recognizer on M4, whose e is not free", caught(&m4, "e"))
        } else {
            // a chord through two basis elements of a ternary circuit
            let c = build_named(FamilyTag::Circuit { r: 5, q: 3 }).expect("circuit builds");
            let m = LinearMatroid::new(c.rep().with_column(vec![1, 1, 0, 0, 0], "x").expect("column fits"))
                .expect("rank 5");
            ("shape recognizer on a ternary circuit with a chord", caught(&m, "e"))
        };
        vec![control(name, true, "violation", observed.to_string())]
    }

    fn bias(&self) -> Option<String> {
        (self.cfg.q == 2 && self.cfg.mode == Mode::Sampled)
            .then(|| "uniform point subsets of size r + 1 ..= r + 4".to_string())
    }
}
