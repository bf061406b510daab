use crate::domain::{ModelInstance, TechKind};

/// A decision variable in domain terms. Region fields are region indices
/// into the instance; `year` is zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKey {
    /// GW of `tech` installed in `region` during `year`.
    Re {
        region: usize,
        tech: TechKind,
        year: usize,
    },
    /// Tonnes stored by a storage region in its own sites.
    CcsLocal { region: usize, year: usize },
    /// Tonnes from `buyer` stored at `seller`'s sites.
    CcsTraded {
        buyer: usize,
        seller: usize,
        year: usize,
    },
}

/// Bijection between dense variable indices and [`VarKey`]s.
///
/// Layout: RE block ordered by (year, region, tech), then local CCS ordered
/// by (year, seller), then traded CCS ordered by (year, buyer, seller).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableIndex {
    regions: usize,
    years: usize,
    sellers: Vec<usize>,
    buyers: Vec<usize>,
    seller_pos: Vec<Option<usize>>,
    buyer_pos: Vec<Option<usize>>,
}

impl VariableIndex {
    pub fn new(instance: &ModelInstance) -> Self {
        let n = instance.regions().len();
        let mut seller_pos = vec![None; n];
        let mut buyer_pos = vec![None; n];
        for (p, &i) in instance.storage_regions().iter().enumerate() {
            seller_pos[i] = Some(p);
        }
        for (p, &j) in instance.buyer_regions().iter().enumerate() {
            buyer_pos[j] = Some(p);
        }
        Self {
            regions: n,
            years: instance.num_years(),
            sellers: instance.storage_regions().to_vec(),
            buyers: instance.buyer_regions().to_vec(),
            seller_pos,
            buyer_pos,
        }
    }

    pub fn num_regions(&self) -> usize {
        self.regions
    }

    pub fn num_years(&self) -> usize {
        self.years
    }

    pub fn sellers(&self) -> &[usize] {
        &self.sellers
    }

    pub fn buyers(&self) -> &[usize] {
        &self.buyers
    }

    fn re_len(&self) -> usize {
        self.regions * TechKind::COUNT * self.years
    }

    fn local_len(&self) -> usize {
        self.sellers.len() * self.years
    }

    /// n·K·T + |V_s|·T + |V_b|·|V_s|·T.
    pub fn len(&self) -> usize {
        self.re_len() + self.local_len() + self.buyers.len() * self.sellers.len() * self.years
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn re(&self, region: usize, tech: TechKind, year: usize) -> usize {
        (year * self.regions + region) * TechKind::COUNT + tech.index()
    }

    /// `None` unless `region` has storage.
    pub fn ccs_local(&self, region: usize, year: usize) -> Option<usize> {
        let p = self.seller_pos[region]?;
        Some(self.re_len() + year * self.sellers.len() + p)
    }

    /// `None` unless `buyer` lacks storage and `seller` has it.
    pub fn ccs_traded(&self, buyer: usize, seller: usize, year: usize) -> Option<usize> {
        let jp = self.buyer_pos[buyer]?;
        let ip = self.seller_pos[seller]?;
        let s = self.sellers.len();
        Some(self.re_len() + self.local_len() + (year * self.buyers.len() + jp) * s + ip)
    }

    /// Variables whose value is stored in, or captured by, region `region`
    /// during `year`: the region's own CCS total `CCS_i(t)`.
    pub fn ccs_of_region(&self, region: usize, year: usize) -> Vec<usize> {
        match self.ccs_local(region, year) {
            Some(v) => vec![v],
            None => self
                .sellers
                .iter()
                .filter_map(|&i| self.ccs_traded(region, i, year))
                .collect(),
        }
    }

    /// Variables using `seller`'s storage during `year`.
    pub fn storage_use(&self, seller: usize, year: usize) -> Vec<usize> {
        let mut vars: Vec<usize> = self.ccs_local(seller, year).into_iter().collect();
        vars.extend(
            self.buyers
                .iter()
                .filter_map(|&j| self.ccs_traded(j, seller, year)),
        );
        vars
    }

    pub fn key(&self, idx: usize) -> VarKey {
        assert!(idx < self.len(), "variable index {idx} out of range");
        if idx < self.re_len() {
            let k = TechKind::ALL[idx % TechKind::COUNT];
            let rest = idx / TechKind::COUNT;
            return VarKey::Re {
                region: rest % self.regions,
                tech: k,
                year: rest / self.regions,
            };
        }
        let idx = idx - self.re_len();
        if idx < self.local_len() {
            let s = self.sellers.len();
            return VarKey::CcsLocal {
                region: self.sellers[idx % s],
                year: idx / s,
            };
        }
        let idx = idx - self.local_len();
        let s = self.sellers.len();
        let b = self.buyers.len();
        let seller = self.sellers[idx % s];
        let rest = idx / s;
        VarKey::CcsTraded {
            buyer: self.buyers[rest % b],
            seller,
            year: rest / b,
        }
    }

    pub fn index_of(&self, key: VarKey) -> Option<usize> {
        match key {
            VarKey::Re { region, tech, year } => {
                (region < self.regions && year < self.years).then(|| self.re(region, tech, year))
            }
            VarKey::CcsLocal { region, year } if region < self.regions && year < self.years => {
                self.ccs_local(region, year)
            }
            VarKey::CcsTraded {
                buyer,
                seller,
                year,
            } if buyer < self.regions && seller < self.regions && year < self.years => {
                self.ccs_traded(buyer, seller, year)
            }
            _ => None,
        }
    }

    /// Diagnostic label, e.g. `RE[R1][solar][2018]`.
    pub fn name(&self, idx: usize, instance: &ModelInstance) -> String {
        let id = |i: usize| instance.region(i).id.as_str();
        let year = |t: usize| instance.horizon().year(t);
        match self.key(idx) {
            VarKey::Re {
                region,
                tech,
                year: t,
            } => {
                format!("RE[{}][{}][{}]", id(region), tech, year(t))
            }
            VarKey::CcsLocal { region, year: t } => format!("CCS_s[{}][{}]", id(region), year(t)),
            VarKey::CcsTraded {
                buyer,
                seller,
                year: t,
            } => format!("CCS_b[{}][{}][{}]", id(buyer), id(seller), year(t)),
        }
    }
}
