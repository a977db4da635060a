use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::gen::{projective_points, random_vector, sample_rng, scramble};
use super::{control, Acc, Control, Mode, Runner, SuiteConfig, VerifyError};
use crate::classify::{binary_structure, falsify, BinaryFamily, LooseCase};
use crate::families::{build_figure, FamilyTag};
use crate::gfq::{field, Code, FieldSpec};
use crate::matroid::{embed_binary, LinearMatroid};

const EXHAUSTIVE_MAX_RANK: usize = 4;
const FORWARD_MAX_RANK: usize = 12;

pub(crate) struct BinarySuite {
    cfg: SuiteConfig,
    f: &'static FieldSpec,
    points: BTreeMap<usize, Vec<Vec<Code>>>,
    figures: BTreeMap<usize, Vec<LinearMatroid>>,
}

fn figure_tags(r: usize) -> Vec<FamilyTag> {
    let mut tags = vec![FamilyTag::L(r)];
    if r >= 4 {
        tags.push(FamilyTag::J(r));
    }
    tags.extend([FamilyTag::M(r), FamilyTag::N(r)]);
    tags
}

fn expected_family(tag: FamilyTag) -> BinaryFamily {
    match tag {
        FamilyTag::L(_) => BinaryFamily::Lr,
        FamilyTag::J(_) => BinaryFamily::Jr,
        FamilyTag::M(_) => BinaryFamily::MrRestriction,
        _ => BinaryFamily::NrRestriction,
    }
}

impl BinarySuite {
    pub(crate) fn new(cfg: &SuiteConfig) -> Result<Self, VerifyError> {
        if cfg.q != 2 {
            return Err(VerifyError::Guard(format!(
                "thm-binary is binary only (got q = {})",
                cfg.q
            )));
        }
        if cfg.min_rank < 3 {
            return Err(VerifyError::Guard("thm-binary starts at rank 3".into()));
        }
        if cfg.max_rank > 64 {
            return Err(VerifyError::Guard("rank above 64".into()));
        }
        if cfg.mode == Mode::Exhaustive && cfg.max_rank > EXHAUSTIVE_MAX_RANK {
            return Err(VerifyError::Guard(format!(
                "exhaustive thm-binary is limited to rank {EXHAUSTIVE_MAX_RANK}; use sampling above it"
            )));
        }
        let f = field(2).expect("GF(2)");
        let mut points = BTreeMap::new();
        let mut figures = BTreeMap::new();
        for r in cfg.rank_range() {
            if cfg.mode == Mode::Exhaustive {
                points.insert(r, projective_points(f, r));
            }
            let figs = figure_tags(r)
                .into_iter()
                .map(|t| build_figure(t).expect("rank checked"))
                .collect();
            figures.insert(r, figs);
        }
        Ok(BinarySuite {
            cfg: cfg.clone(),
            f,
            points,
            figures,
        })
    }

    fn exhaustive_instance(&self, r: usize, mask: u64) -> Option<LinearMatroid> {
        if (mask.count_ones() as usize) < r {
            return None;
        }
        let pts = &self.points[&r];
        let (cols, labels) = (0..pts.len())
            .filter(|j| mask >> j & 1 == 1)
            .map(|j| (pts[j].clone(), format!("p{}", j + 1)))
            .unzip();
        Some(super::gen::matroid_of(self.f, r, cols, labels))
    }

    fn sampled_instance(&self, r: usize, index: u64) -> LinearMatroid {
        let mut rng = sample_rng(self.cfg.seed, r, index);
        let f = self.f;
        let figs = &self.figures[&r];
        let (cols, labels): (Vec<Vec<Code>>, Vec<String>) = match index % 3 {
            0 => {
                let fig = figs.choose(&mut rng).expect("figures exist");
                let mut keep: Vec<usize> = Vec::new();
                for _ in 0..32 {
                    keep = (0..fig.len()).filter(|&j| j == r || rng.gen_bool(0.6)).collect();
                    if fig.rank_of_indices(&keep) == r {
                        break;
                    }
                }
                keep.iter()
                    .map(|&j| (fig.rep().column(j).to_vec(), fig.label(j).to_string()))
                    .unzip()
            }
            1 => {
                let fig = figs.choose(&mut rng).expect("figures exist");
                let (mut cols, mut labels): (Vec<Vec<Code>>, Vec<String>) = fig
                    .rep()
                    .columns()
                    .map(|c| c.to_vec())
                    .zip(fig.labels().iter().cloned())
                    .unzip();
                for _ in 0..32 {
                    let v = random_vector(f, r, &mut rng);
                    if v.iter().any(|&a| a != 0) && !cols.contains(&v) {
                        cols.push(v);
                        labels.push("x".into());
                        break;
                    }
                }
                (cols, labels)
            }
            _ => {
                let cap = if r < 12 { (1usize << r) - 1 } else { usize::MAX };
                let n = rng.gen_range(r + 1..=(3 * r).min(cap));
                let mut cols: Vec<Vec<Code>> = Vec::new();
                while cols.len() < n {
                    let v = random_vector(f, r, &mut rng);
                    if v.iter().any(|&a| a != 0) && !cols.contains(&v) {
                        cols.push(v);
                    }
                }
                let labels = (1..=n).map(|k| format!("c{k}")).collect();
                (cols, labels)
            }
        };
        scramble(f, r, &cols, &labels, &mut rng)
    }

    // an embedding of `m` into some rank-r figure sending `e` anywhere
    fn embeds_unanchored(&self, r: usize, m: &LinearMatroid, e: usize) -> bool {
        self.figures[&r]
            .iter()
            .any(|fig| (0..fig.len()).any(|a| embed_binary(m, e, fig, a).is_some()))
    }

    /// Both directions of the iff for every element. `force_loose` overrides
    /// the looseness oracle for one element.
    fn check(&self, r: usize, index: u64, m: &LinearMatroid, acc: &mut Acc, force_loose: Option<usize>) {
        acc.examined();
        let n = m.len();
        acc.tally(format!("r{r}.instances"), 1);
        for e in 0..n {
            let loose = force_loose == Some(e) || m.is_loose(e);
            match (loose, binary_structure(m, e)) {
                (true, Ok(v)) => {
                    acc.tally(format!("r{r}.loose"), 1);
                    acc.tally(format!("r{r}.branch.{}", v.family.name()), 1);
                    let case = match v.case {
                        LooseCase::SpanningCase => "spanning",
                        LooseCase::NonspanningCase => "nonspanning",
                    };
                    acc.tally(format!("r{r}.case.{case}"), 1);
                }
                (false, Err(_)) => acc.tally(format!("r{r}.not_loose"), 1),
                (true, Err(fail)) => acc.violate(
                    r,
                    index,
                    falsify(
                        m,
                        "loose binary element classification",
                        format!("loose element fails {}: {}", fail.check, fail.detail),
                        vec![m.label(e).to_string()],
                    ),
                ),
                (false, Ok(v)) => acc.violate(
                    r,
                    index,
                    falsify(
                        m,
                        "loose binary element classification",
                        format!(
                            "element with girth {:?} classified as {}",
                            m.girth_through_idx(e),
                            v.family.name()
                        ),
                        vec![m.label(e).to_string()],
                    ),
                ),
            }
            if !loose && n <= 2 * r && self.embeds_unanchored(r, m, e) {
                acc.tally(format!("r{r}.unanchored_only"), 1);
            }
        }
    }
}

impl Runner for BinarySuite {
    fn units(&self) -> Vec<(usize, u64)> {
        self.cfg
            .rank_range()
            .map(|r| match self.cfg.mode {
                Mode::Exhaustive => (r, 1u64 << ((1usize << r) - 1)),
                Mode::Sampled => (r, self.cfg.samples),
            })
            .collect()
    }

    fn run(&self, r: usize, index: u64, acc: &mut Acc) {
        let m = match self.cfg.mode {
            Mode::Exhaustive => match self.exhaustive_instance(r, index) {
                Some(m) => m,
                None => return,
            },
            Mode::Sampled => self.sampled_instance(r, index),
        };
        if m.rank() < r || !m.is_simple() || !m.coloops().is_empty() {
            return;
        }
        self.check(r, index, &m, acc, None);
    }

    fn controls(&self, _acc: &mut Acc) -> Vec<Control> {
        let mut forward = "all classified".to_string();
        'ranks: for r in 3..=FORWARD_MAX_RANK {
            for tag in figure_tags(r) {
                let fig = build_figure(tag).expect("rank in range");
                let ok = fig.is_loose(r) && binary_structure(&fig, r).is_ok_and(|v| v.family == expected_family(tag));
                if !ok {
                    forward = format!("{tag} not classified");
                    break 'ranks;
                }
            }
        }

        // PG(3,2) has no loose element; claiming one must be caught
        let f = self.f;
        let pts = projective_points(f, 4);
        let labels = (1..=pts.len()).map(|k| format!("p{k}")).collect();
        let pg = super::gen::matroid_of(f, 4, pts, labels);
        let mut probe = Acc::default();
        self.check(4, 0, &pg, &mut probe, Some(0));
        let caught = if probe.violation_count > 0 { "violation" } else { "none" };

        vec![
            control(
                &format!("figures L, J, M, N classify as themselves, ranks 3..{FORWARD_MAX_RANK}"),
                false,
                "all classified",
                forward,
            ),
            control(
                "non-loose element of PG(3,2) forced loose",
                true,
                "violation",
                caught.to_string(),
            ),
        ]
    }

    fn bias(&self) -> Option<String> {
        (self.cfg.mode == Mode::Sampled).then(|| {
            "one third each: random restrictions of the four figures, one-point extensions of them, \
             uniform point sets; all in random coordinates"
                .to_string()
        })
    }
}
