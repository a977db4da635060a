use rand::seq::index::sample;
use rand::Rng;

use super::gen::{matroid_of, projective_points, sample_rng};
use super::{control, Acc, Control, Mode, Runner, SuiteConfig, VerifyError};
use crate::classify::{falsify, paving_audit, paving_checks, ClassifyError, PavingAudit};
use crate::families::{build_figure, build_named, FamilyTag};
use crate::gfq::{field, Code, FieldSpec};
use crate::matroid::{iso_check, LinearMatroid};

const EXHAUSTIVE_MAX_RANK: usize = 4;
const SAMPLED_MAX_RANK: usize = 16;
const GOLAY_MIN_SIZE: u32 = 7;

pub(crate) struct PavingSuite {
    cfg: SuiteConfig,
    f: &'static FieldSpec,
    points: Vec<(usize, Vec<Vec<Code>>)>,
    ag32: LinearMatroid,
    golay: LinearMatroid,
    // q = 3: restriction masks of the Golay matroid, each audited with its dual
    golay_masks: Vec<u16>,
}

fn audit_summary(a: &PavingAudit) -> String {
    format!(
        "rank {} size {} sparse_paving {} spanning_circuit {}",
        a.rank, a.size, a.sparse_paving, a.spanning_circuit
    )
}

impl PavingSuite {
    pub(crate) fn new(cfg: &SuiteConfig) -> Result<Self, VerifyError> {
        let f = field(cfg.q as u32).map_err(|e| VerifyError::Config(e.to_string()))?;
        let mut golay_masks = Vec::new();
        match cfg.q {
            2 => {
                if cfg.min_rank < 2 {
                    return Err(VerifyError::Guard("thm-paving starts at rank 2".into()));
                }
                if cfg.max_rank > SAMPLED_MAX_RANK {
                    return Err(VerifyError::Guard(format!(
                        "binary paving sampling is limited to rank {SAMPLED_MAX_RANK}"
                    )));
                }
                if cfg.mode == Mode::Exhaustive && cfg.max_rank > EXHAUSTIVE_MAX_RANK {
                    return Err(VerifyError::Guard(format!(
                        "exhaustive binary paving sweep is limited to rank {EXHAUSTIVE_MAX_RANK}"
                    )));
                }
            }
            3 => {
                if cfg.mode == Mode::Exhaustive {
                    return Err(VerifyError::Guard("no full ternary paving enumeration".into()));
                }
                if cfg.min_rank != 6 || cfg.max_rank != 6 {
                    return Err(VerifyError::Guard(
                        "the ternary paving sweep is the rank-6 Golay matroid, its restrictions and their duals".into(),
                    ));
                }
                golay_masks = (0u16..1 << 12).filter(|m| m.count_ones() >= GOLAY_MIN_SIZE).collect();
            }
            q => return Err(VerifyError::Guard(format!("thm-paving takes q in {{2, 3}} (got {q})"))),
        }
        let points = if cfg.mode == Mode::Exhaustive || cfg.q == 2 {
            cfg.rank_range().map(|r| (r, projective_points(f, r))).collect()
        } else {
            Vec::new()
        };
        Ok(PavingSuite {
            cfg: cfg.clone(),
            f,
            points,
            ag32: build_named(FamilyTag::Ag32).expect("AG(3,2) builds"),
            golay: build_named(FamilyTag::Golay12).expect("Golay builds"),
            golay_masks,
        })
    }

    fn points(&self, r: usize) -> &[Vec<Code>] {
        &self.points.iter().find(|p| p.0 == r).expect("rank swept").1
    }

    fn check(&self, r: usize, index: u64, m: &LinearMatroid, acc: &mut Acc, tag: &str) {
        if m.rank() != r || !m.is_simple() || !m.coloops().is_empty() {
            return;
        }
        if !m.is_paving() {
            acc.tally(format!("{tag}.not_paving"), 1);
            return;
        }
        acc.examined();
        acc.tally(format!("{tag}.paving"), 1);
        match paving_audit(m) {
            Ok(a) => {
                acc.tally(format!("{tag}.branch.{:?}", a.branch), 1);
                if a.sparse_paving {
                    acc.tally(format!("{tag}.sparse_paving"), 1);
                }
                acc.max(format!("{tag}.size"), a.size as u64);
            }
            Err(ClassifyError::Falsification(fal)) => acc.violate(r, index, *fal),
            Err(other) => acc.violate(r, index, falsify(m, "paving audit", other.to_string(), Vec::new())),
        }
        if self.cfg.q == 2 && r == 4 && m.len() == 8 {
            match iso_check(m, &self.ag32, None) {
                Ok(Some(_)) => acc.tally(format!("{tag}.n8_isomorphic_to_ag32"), 1),
                _ => acc.violate(
                    r,
                    index,
                    falsify(
                        m,
                        "unique binary paving matroid of rank 4 on 8 elements",
                        "not isomorphic to AG(3,2)".into(),
                        Vec::new(),
                    ),
                ),
            }
        }
    }
}

impl Runner for PavingSuite {
    fn units(&self) -> Vec<(usize, u64)> {
        if self.cfg.q == 3 {
            return vec![(6, self.golay_masks.len() as u64)];
        }
        self.cfg
            .rank_range()
            .map(|r| match self.cfg.mode {
                Mode::Exhaustive => (r, 1u64 << self.points(r).len()),
                Mode::Sampled => (r, self.cfg.samples),
            })
            .collect()
    }

    fn run(&self, r: usize, index: u64, acc: &mut Acc) {
        if self.cfg.q == 3 {
            let mask = self.golay_masks[index as usize];
            let keep: Vec<usize> = (0..12).filter(|j| mask >> j & 1 == 1).collect();
            let m = self.golay.restrict_idx(&keep);
            self.check(6, index, &m, acc, "golay.restriction");
            let d = m.dual();
            self.check(d.rank(), index, &d, acc, "golay.dual");
            return;
        }
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
                let n = rng.gen_range(r + 1..=pts.len().min(2 * r + 2));
                let mut c = sample(&mut rng, pts.len(), n).into_vec();
                c.sort_unstable();
                c
            }
        };
        let cols = chosen.iter().map(|&j| pts[j].clone()).collect();
        let labels = chosen.iter().map(|&j| format!("p{}", j + 1)).collect();
        let m = matroid_of(self.f, r, cols, labels);
        self.check(r, index, &m, acc, &format!("r{r}"));
    }

    fn controls(&self, _acc: &mut Acc) -> Vec<Control> {
        let summary = |m: &LinearMatroid| match paving_audit(m) {
            Ok(a) => audit_summary(&a),
            Err(e) => e.to_string(),
        };
        let m5 = build_figure(FamilyTag::M(5)).expect("M5 builds");
        let negative = match paving_checks(&m5) {
            Err(ClassifyError::Falsification(_)) => "violation",
            _ => "none",
        };
        vec![
            control(
                "AG(3,2) audit",
                false,
                "rank 4 size 8 sparse_paving true spanning_circuit false",
                summary(&self.ag32),
            ),
            control(
                "Golay matroid audit",
                false,
                "rank 6 size 12 sparse_paving true spanning_circuit false",
                summary(&self.golay),
            ),
            control(
                "paving implications on the non-paving M5",
                true,
                "violation",
                negative.to_string(),
            ),
        ]
    }

    fn bias(&self) -> Option<String> {
        (self.cfg.q == 2 && self.cfg.mode == Mode::Sampled)
            .then(|| "uniform point subsets of size r + 1 ..= 2r + 2".to_string())
    }
}
