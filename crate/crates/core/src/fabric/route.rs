use super::FabricConfig;

/// What a site does with a message addressed to `dest`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Consume,
    Right,
    Down,
}

/// Output links of a site. `Right` feeds the next column's left port and
/// `Down` the next row's top port, both wrapping around the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Link {
    Right,
    Down,
}

/// Down until the row matches, then right.
pub fn route_decision(current: usize, dest: usize, cfg: &FabricConfig) -> Route {
    if current == dest {
        Route::Consume
    } else if cfg.row_of(current) != cfg.row_of(dest) {
        Route::Down
    } else {
        Route::Right
    }
}

/// Neighbour reached over `link`, with torus wraparound.
pub fn neighbor(current: usize, link: Link, cfg: &FabricConfig) -> usize {
    let (row, col) = (cfg.row_of(current), cfg.col_of(current));
    match link {
        Link::Right => cfg.address(row, (col + 1) % cfg.cols),
        Link::Down => cfg.address((row + 1) % cfg.rows, col),
    }
}

impl Route {
    pub fn link(self) -> Option<Link> {
        match self {
            Route::Consume => None,
            Route::Right => Some(Link::Right),
            Route::Down => Some(Link::Down),
        }
    }
}
