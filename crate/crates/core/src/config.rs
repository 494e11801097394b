/// Size limits shared by every enumeration in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest poset any construction may produce.
    pub elems: usize,
    /// Largest `|A| * |B|` accepted by pair enumeration.
    pub pair_product: usize,
    /// Deepest chain the solver will iterate.
    pub depth: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            elems: 512,
            pair_product: 64,
            depth: 8,
        }
    }
}

pub const ENV_CAP_ELEMS: &str = "EPSOLVE_CAP_ELEMS";

impl Caps {
    /// Defaults, with the element cap overridden by `EPSOLVE_CAP_ELEMS` when set.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Some(n) = std::env::var(ENV_CAP_ELEMS)
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            caps.elems = n;
        }
        caps
    }
}
