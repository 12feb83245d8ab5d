use super::InjectionSchedule;
use crate::fabric::{FabricConfig, Port};
use crate::isa::{MessageWord, Opcode};

/// Three-product sum on a 1×4 strip: sites 0..2 hold 1.1, 1.2 and 1.3,
/// multiply them by 1, 2 and 3 and send the products to site 3, which
/// ends with `1.1 + 2.4 + 3.9`.
pub fn walkthrough() -> (FabricConfig, InjectionSchedule) {
    let cfg = FabricConfig::new(1, 4).expect("1x4 is a valid fabric");
    let mut sched = InjectionSchedule::new();
    let programs = [(1.1, Opcode::Add), (1.2, Opcode::Add), (1.3, Opcode::Update)];
    for (site, (value, next)) in programs.into_iter().enumerate() {
        let word = MessageWord::new(Opcode::Prog, site as u16, value, next, 3);
        sched.inject(0, Port::TopEdge(site), word);
    }
    for site in 0..3 {
        let word = MessageWord::simple(Opcode::MulS, site as u16, (site + 1) as f32);
        sched.inject(1, Port::TopEdge(site), word);
    }
    sched.expected_timesteps = 5;
    sched.notes.push("sum of products 1.1*1 + 1.2*2 + 1.3*3 collected at site 3".into());
    sched.notes.push(
        "site 3 ends at 1.1 + 2.4 + 3.9 = 7.4; the 7.9 often quoted for this example does not match its own intermediates"
            .into(),
    );
    (cfg, sched)
}
