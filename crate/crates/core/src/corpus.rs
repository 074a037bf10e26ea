//! Reference programs and a seeded generator of random well-formed programs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cc::{ChorProgram, Choreography, Eta, Procedure};
use crate::expr::{BExpr, Expr};
use crate::ident::{Label, Pid, RecVar};
use crate::sp::{Behaviour, Network};

use Choreography as C;

fn com(from: &str, e: Expr, to: &str, x: &str) -> Eta {
    Eta::com(from, e, to, x)
}

fn v(name: &str) -> Expr {
    Expr::var(name)
}

fn is_zero(x: &str) -> BExpr {
    BExpr::Eq(v(x), Expr::Lit(0))
}

fn acceptable() -> BExpr {
    BExpr::Le(v("x"), Expr::Lit(100))
}

/// The buyer/seller purchase without selections (not projectable on buyer).
pub fn buyer_seller() -> ChorProgram {
    ChorProgram::new(C::prefix(
        com("buyer", v("offer"), "seller", "x"),
        C::cond(
            "seller",
            acceptable(),
            C::prefix(com("seller", v("product"), "buyer", "y"), C::End),
            C::End,
        ),
    ))
}

/// The buyer/seller purchase with selections informing buyer.
pub fn buyer_seller_selections() -> ChorProgram {
    ChorProgram::new(C::prefix(
        com("buyer", v("offer"), "seller", "x"),
        C::cond(
            "seller",
            acceptable(),
            C::seq(
                [
                    Eta::sel("seller", "buyer", Label::Left),
                    com("seller", v("product"), "buyer", "y"),
                ],
                C::End,
            ),
            C::prefix(Eta::sel("seller", "buyer", Label::Right), C::End),
        ),
    ))
}

/// Two independent orders.
pub fn two_orders() -> ChorProgram {
    ChorProgram::new(C::seq(
        [
            com("o", v("order"), "p", "x"),
            com("o'", v("order'"), "p'", "y"),
        ],
        C::End,
    ))
}

/// The network implementing [`buyer_seller_selections`].
pub fn buyer_seller_network() -> Network {
    let buyer = Behaviour::send(
        "seller",
        v("offer"),
        Behaviour::branch(
            "seller",
            Some(Behaviour::recv("seller", "y", Behaviour::End)),
            Some(Behaviour::End),
        ),
    );
    let seller = Behaviour::recv(
        "buyer",
        "x",
        Behaviour::cond(
            acceptable(),
            Behaviour::choose(
                "buyer",
                Label::Left,
                Behaviour::send("buyer", v("product"), Behaviour::End),
            ),
            Behaviour::choose("buyer", Label::Right, Behaviour::End),
        ),
    );
    [(Pid::new("buyer"), buyer), (Pid::new("seller"), seller)]
        .into_iter()
        .collect()
}

/// `p.e -> q.x; if r.b then { r.e' -> p.y; end } else { end }`: amending
/// it loses the execution where `r` decides first.
pub fn amend_counterexample() -> ChorProgram {
    ChorProgram::new(C::prefix(
        com("p", v("e"), "q", "x"),
        C::cond(
            "r",
            is_zero("b"),
            C::prefix(com("r", v("e'"), "p", "y"), C::End),
            C::End,
        ),
    ))
}

/// What [`amend_counterexample`] becomes after `r` takes the then-branch.
pub fn amend_counterexample_step() -> Choreography {
    C::seq(
        [com("p", v("e"), "q", "x"), com("r", v("e'"), "p", "y")],
        C::End,
    )
}

pub fn amend_counterexample_amended() -> ChorProgram {
    ChorProgram::new(C::prefix(
        com("p", v("e"), "q", "x"),
        C::cond(
            "r",
            is_zero("b"),
            C::seq(
                [Eta::sel("r", "p", Label::Left), com("r", v("e'"), "p", "y")],
                C::End,
            ),
            C::prefix(Eta::sel("r", "p", Label::Right), C::End),
        ),
    ))
}

/// Both branches start with the same `q -> r` communication, which can run
/// before the conditional; in the amendment it cannot.
pub fn minimal_counterexample() -> ChorProgram {
    ChorProgram::new(C::cond(
        "p",
        is_zero("b"),
        C::seq(
            [com("q", v("e"), "r", "x"), com("q", v("e"), "p", "x")],
            C::End,
        ),
        C::prefix(com("q", v("e"), "r", "x"), C::End),
    ))
}

pub fn minimal_counterexample_amended() -> ChorProgram {
    ChorProgram::new(C::cond(
        "p",
        is_zero("b"),
        C::seq(
            [
                Eta::sel("p", "q", Label::Left),
                com("q", v("e"), "r", "x"),
                com("q", v("e"), "p", "x"),
            ],
            C::End,
        ),
        C::seq(
            [Eta::sel("p", "q", Label::Right), com("q", v("e"), "r", "x")],
            C::End,
        ),
    ))
}

/// `q` either forwards a value from `p` to `r` or computes it itself.
pub fn proxy() -> ChorProgram {
    ChorProgram::new(C::cond(
        "p",
        is_zero("b"),
        C::seq(
            [com("p", v("e"), "q", "x"), com("q", v("e'"), "r", "y")],
            C::End,
        ),
        C::prefix(com("q", v("e''"), "r", "y"), C::End),
    ))
}

pub fn proxy_amended() -> ChorProgram {
    ChorProgram::new(C::cond(
        "p",
        is_zero("b"),
        C::seq(
            [
                Eta::sel("p", "q", Label::Left),
                com("p", v("e"), "q", "x"),
                com("q", v("e'"), "r", "y"),
            ],
            C::End,
        ),
        C::seq(
            [
                Eta::sel("p", "q", Label::Right),
                com("q", v("e''"), "r", "y"),
            ],
            C::End,
        ),
    ))
}

/// `q.x := p.x + 1`.
pub fn successor() -> ChorProgram {
    ChorProgram::new(C::prefix(com("p", Expr::succ(v("x")), "q", "x"), C::End))
}

/// `r.x := 1` if `p.x == q.x`, else `0`.
pub fn equality_test() -> ChorProgram {
    ChorProgram::new(C::prefix(
        com("q", v("x"), "p", "y"),
        C::cond(
            "p",
            BExpr::Eq(v("x"), v("y")),
            C::prefix(com("p", Expr::succ(v("z")), "r", "x"), C::End),
            C::prefix(com("q", Expr::Lit(0), "r", "x"), C::End),
        ),
    ))
}

/// A procedure that calls itself forever.
pub fn ping_loop() -> ChorProgram {
    let body = C::prefix(com("p", v("x"), "q", "x"), C::call("Loop"));
    ChorProgram::new(C::call("Loop")).with_procedure("Loop", Procedure::new(&["p", "q"], body))
}

/// A program whose only procedure body needs amending.
pub fn proc_with_unprojectable_body() -> ChorProgram {
    let body = C::cond(
        "p",
        is_zero("x"),
        C::prefix(com("q", v("x"), "r", "y"), C::End),
        C::End,
    );
    ChorProgram::new(C::prefix(com("p", Expr::Lit(1), "q", "x"), C::call("X")))
        .with_procedure("X", Procedure::new(&["p", "q", "r"], body))
}

/// Every hand-written program, with a short name.
pub fn named_programs() -> Vec<(&'static str, ChorProgram)> {
    vec![
        ("buyer-seller", buyer_seller()),
        ("buyer-seller-selections", buyer_seller_selections()),
        ("two-orders", two_orders()),
        ("amend-counterexample", amend_counterexample()),
        (
            "amend-counterexample-amended",
            amend_counterexample_amended(),
        ),
        ("minimal-counterexample", minimal_counterexample()),
        (
            "minimal-counterexample-amended",
            minimal_counterexample_amended(),
        ),
        ("proxy", proxy()),
        ("proxy-amended", proxy_amended()),
        ("successor", successor()),
        ("equality-test", equality_test()),
        ("ping-loop", ping_loop()),
        ("procedure-body", proc_with_unprojectable_body()),
    ]
}

const PROCESSES: [&str; 4] = ["p", "q", "r", "s"];
const VARIABLES: [&str; 2] = ["x", "y"];

/// Shape limits for [`random_program`].
#[derive(Clone, Copy, Debug)]
pub struct GenLimits {
    /// Upper bound on non-`End` constructors across main and all bodies.
    pub max_nodes: usize,
    pub max_procedures: usize,
}

impl Default for GenLimits {
    fn default() -> Self {
        GenLimits {
            max_nodes: 8,
            max_procedures: 2,
        }
    }
}

struct Gen<'a, R> {
    rng: &'a mut R,
    budget: usize,
}

impl<R: Rng> Gen<'_, R> {
    fn pick<'b, T>(&mut self, xs: &'b [T]) -> &'b T {
        xs.choose(self.rng).expect("nonempty")
    }

    fn expr(&mut self) -> Expr {
        match self.rng.gen_range(0..4) {
            0 => Expr::Lit(self.rng.gen_range(0..3)),
            1 => Expr::succ(Expr::var(self.pick(&VARIABLES))),
            _ => Expr::var(self.pick(&VARIABLES)),
        }
    }

    fn guard(&mut self) -> BExpr {
        let x = Expr::var(self.pick(&VARIABLES));
        match self.rng.gen_range(0..4) {
            0 => BExpr::True,
            1 => BExpr::Le(x, Expr::Lit(self.rng.gen_range(0..2))),
            2 => BExpr::Eq(x, Expr::var(self.pick(&VARIABLES))),
            _ => BExpr::Eq(x, Expr::Lit(0)),
        }
    }

    fn pair(&mut self, pids: &[Pid]) -> (Pid, Pid) {
        let mut two: Vec<&Pid> = pids.choose_multiple(self.rng, 2).collect();
        two.shuffle(self.rng);
        (two[0].clone(), two[1].clone())
    }

    fn chor(&mut self, pids: &[Pid], callable: &[RecVar]) -> Choreography {
        if self.budget == 0 {
            return C::End;
        }
        let roll = self.rng.gen_range(0..100);
        if roll < 5 {
            return C::End;
        }
        self.budget -= 1;
        if roll < 45 {
            let (from, to) = self.pair(pids);
            let eta = Eta::Com {
                from,
                expr: self.expr(),
                to,
                var: (*self.pick(&VARIABLES)).into(),
            };
            C::Prefix(eta, Box::new(self.chor(pids, callable)))
        } else if roll < 63 {
            let (from, to) = self.pair(pids);
            let label = *self.pick(&Label::ALL);
            C::Prefix(
                Eta::Sel { from, to, label },
                Box::new(self.chor(pids, callable)),
            )
        } else if roll < 90 || callable.is_empty() {
            let at = self.pick(pids).clone();
            let guard = self.guard();
            let then_c = self.chor(pids, callable);
            let else_c = self.chor(pids, callable);
            C::Cond {
                at,
                guard,
                then_branch: Box::new(then_c),
                else_branch: Box::new(else_c),
            }
        } else {
            C::Call(self.pick(callable).clone())
        }
    }
}

/// A random well-formed program over processes `p, q, r, s`.
pub fn random_program<R: Rng>(rng: &mut R, limits: GenLimits) -> ChorProgram {
    let all: Vec<Pid> = PROCESSES.iter().map(Pid::new).collect();
    let n_procs = rng.gen_range(0..=limits.max_procedures);
    let mut decls: Vec<(RecVar, Vec<Pid>)> = Vec::new();
    for i in 0..n_procs {
        let k = rng.gen_range(2..=3);
        let mut pids: Vec<Pid> = all.choose_multiple(rng, k).cloned().collect();
        pids.sort();
        decls.push((RecVar::new(format!("X{i}")), pids));
    }
    let mut gen = Gen {
        rng,
        budget: limits.max_nodes,
    };
    let mut prog = ChorProgram::default();
    let bodies: Vec<(RecVar, Procedure)> = decls
        .iter()
        .map(|(name, pids)| {
            let callable: Vec<RecVar> = decls
                .iter()
                .filter(|(_, qs)| qs.iter().all(|q| pids.contains(q)))
                .map(|(n, _)| n.clone())
                .collect();
            let body = gen.chor(pids, &callable);
            (
                name.clone(),
                Procedure {
                    pids: pids.clone(),
                    body,
                },
            )
        })
        .collect();
    let callable: Vec<RecVar> = decls.iter().map(|(n, _)| n.clone()).collect();
    prog.main = gen.chor(&all, &callable);
    prog.procedures = bodies.into_iter().collect();
    prog
}

/// `count` random programs from a fixed seed.
pub fn random_corpus(seed: u64, count: usize, limits: GenLimits) -> Vec<ChorProgram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_program(&mut rng, limits))
        .collect()
}

/// Total non-`End` nodes of a program.
pub fn program_size(p: &ChorProgram) -> usize {
    p.main.size() + p.procedures.values().map(|d| d.body.size()).sum::<usize>()
}
