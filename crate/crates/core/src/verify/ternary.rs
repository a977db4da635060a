use rand::seq::SliceRandom;
use rand::Rng;

use super::gen::{basis_plus, projective_points, random_vector, sample_rng, scramble, LooseBuilder};
use super::{control, Acc, Control, Mode, Runner, SuiteConfig, VerifyError};
use crate::classify::{census_of_rep, census_standard_rep, falsify, ternary_census, ternary_size_bound, ClassifyError};
use crate::gfq::{field, Code, FieldSpec};
use crate::matroid::LinearMatroid;

pub(crate) struct TernarySuite {
    cfg: SuiteConfig,
    f: &'static FieldSpec,
}

impl TernarySuite {
    pub(crate) fn new(cfg: &SuiteConfig) -> Result<Self, VerifyError> {
        if cfg.q != 3 {
            return Err(VerifyError::Guard(format!(
                "thm-ternary-bound needs q = 3 (got {})",
                cfg.q
            )));
        }
        if cfg.min_rank < 5 {
            return Err(VerifyError::Guard(format!(
                "thm-ternary-bound needs rank >= 5 (got {})",
                cfg.min_rank
            )));
        }
        if cfg.max_rank > 64 {
            return Err(VerifyError::Guard("rank above 64".into()));
        }
        if cfg.mode == Mode::Exhaustive {
            return Err(VerifyError::Guard(
                "no exhaustive ternary enumeration; use sampling".into(),
            ));
        }
        Ok(TernarySuite {
            cfg: cfg.clone(),
            f: field(3).expect("GF(3)"),
        })
    }

    /// `I_r`, `e = (0, 1, .., 1)` and candidate columns kept whenever `e`
    /// stays loose. `None` when a coloop survives.
    fn instance(&self, r: usize, index: u64) -> Option<LinearMatroid> {
        let f = self.f;
        let mut rng = sample_rng(self.cfg.seed, r, index);
        let mut e = vec![1 as Code; r];
        e[0] = 0;
        let (cols, labels) = basis_plus(r, e);
        let mut b = LooseBuilder::new(f, r, cols, labels, &[r]).expect("e is loose in the seed");
        if index.is_multiple_of(4) {
            // saturate: offer every point once, in random order
            let mut pts = projective_points(f, r);
            pts.shuffle(&mut rng);
            for (k, v) in pts.into_iter().enumerate() {
                b.try_add(v, format!("g{}", k + 1));
            }
            let m = scramble(f, r, b.cols(), b.labels(), &mut rng);
            return m.coloops().is_empty().then_some(m);
        }
        let attempts = rng.gen_range(r..=40 * r);
        for k in 0..attempts {
            let v = match rng.gen_range(0..20) {
                // top entry 1 and at most four signed root entries
                0..=9 => {
                    let mut v = vec![0 as Code; r];
                    v[0] = 1;
                    let h = rng.gen_range(0..=4.min(r - 1));
                    for _ in 0..h {
                        v[rng.gen_range(1..r)] = rng.gen_range(1..3);
                    }
                    v
                }
                // a +1/-1 pair below a zero top entry
                10..=12 => {
                    let mut v = vec![0 as Code; r];
                    let i = rng.gen_range(1..r);
                    let mut j = rng.gen_range(1..r);
                    while j == i {
                        j = rng.gen_range(1..r);
                    }
                    v[i] = 1;
                    v[j] = 2;
                    v
                }
                _ => random_vector(f, r, &mut rng),
            };
            b.try_add(v, format!("g{}", k + 1));
        }
        let m = scramble(f, r, b.cols(), b.labels(), &mut rng);
        m.coloops().is_empty().then_some(m)
    }

    fn check(&self, r: usize, index: u64, m: &LinearMatroid, acc: &mut Acc) {
        let e = m.index_of("e").expect("generator labels e");
        if !m.is_loose(e) {
            acc.violate(
                r,
                index,
                falsify(m, "generator keeps e loose", "e is not loose".into(), vec!["e".into()]),
            );
            return;
        }
        if m.is_free(e) {
            acc.tally(format!("r{r}.free_routed"), 1);
            return;
        }
        acc.examined();
        let n = m.len();
        let bound = ternary_size_bound(r);
        acc.tally(format!("r{r}.instances"), 1);
        acc.max(format!("r{r}.size"), n as u64);
        if n > bound {
            acc.violate(
                r,
                index,
                falsify(
                    m,
                    "ternary size bound",
                    format!("{n} elements exceed {bound}"),
                    vec!["e".into()],
                ),
            );
        }
        match ternary_census(m, "e") {
            Ok(c) => {
                acc.max(format!("r{r}.top_zero"), c.top_zero_count as u64);
                for (h, &t) in c.type_counts.iter().enumerate() {
                    acc.max(format!("r{r}.type{h}"), t as u64);
                }
                acc.max(format!("r{r}.max_same_sign"), c.max_same_sign as u64);
                if !c.case_bound_breaches.is_empty() {
                    acc.tally(format!("r{r}.case_bound_breaches"), 1);
                }
            }
            Err(ClassifyError::Falsification(fal)) => acc.violate(r, index, *fal),
            Err(other) => acc.violate(
                r,
                index,
                falsify(m, "ternary column census", other.to_string(), vec!["e".into()]),
            ),
        }
    }
}

impl Runner for TernarySuite {
    fn units(&self) -> Vec<(usize, u64)> {
        self.cfg.rank_range().map(|r| (r, self.cfg.samples)).collect()
    }

    fn run(&self, r: usize, index: u64, acc: &mut Acc) {
        match self.instance(r, index) {
            Some(m) => self.check(r, index, &m, acc),
            None => acc.tally(format!("r{r}.rejected_coloop"), 1),
        }
    }

    fn controls(&self, _acc: &mut Acc) -> Vec<Control> {
        // a column with top entry 1 and three equal root entries, added to an
        // instance in the census coordinates
        let r = self.cfg.min_rank;
        let observed = (0..64)
            .find_map(|i| self.instance(r, i))
            .and_then(|m| census_standard_rep(&m, "e").ok())
            .and_then(|rep| {
                let mut bad = vec![0 as Code; r];
                bad[0] = 1;
                bad[1..4].fill(1);
                let base = rep.base().with_column(bad, "injected").ok()?;
                let rep = base.standard_rep(rep.basis_order()).ok()?;
                Some(if census_of_rep(&rep, "e").violations.is_empty() {
                    "none"
                } else {
                    "violation"
                })
            })
            .unwrap_or("no instance");
        vec![control(
            "census with an injected three-equal-roots column",
            true,
            "violation",
            observed.to_string(),
        )]
    }

    fn bias(&self) -> Option<String> {
        Some(
            "a quarter of samples offer every point once in random order; the rest offer r..40r columns: half with top entry 1 and at most four root entries, \
             15% top-zero +1/-1 pairs, the rest uniform; kept when e stays loose; random coordinates"
                .to_string(),
        )
    }
}
