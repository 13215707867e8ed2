export interface GaussianParams {
  alpha_bar: number;
  mu_a_nm: number;
  sigma_a_nm: number;
  mu_e_nm: number;
  sigma_e_nm: number;
}

export interface MaterialDoc {
  albedo_xyz: [number, number, number];
  gaussians: GaussianParams[];
  notes: string;
}

export interface MaterialResponse {
  id: string;
  revision: number;
  material: MaterialDoc;
}

/** JSON sidecar describing what each palette cell means. */
export interface PaletteParams {
  mu_e_nm: number[];
  sigma_e_nm: number[];
  resolved_alpha: number[][];
  context: {
    albedo_xyz: [number, number, number];
    illuminant: string;
    mu_a_nm: number;
    sigma_a_nm: number;
  };
}

export interface EditorState {
  materialId: string | null;
  revision: number;
  gaussian: GaussianParams;
  albedo: [number, number, number];
  illuminantLeft: string;
  illuminantRight: string;
  paletteCell: { row: number; col: number } | null;
}

export const DEFAULT_GAUSSIAN: GaussianParams = {
  alpha_bar: 0.8,
  mu_a_nm: 420,
  sigma_a_nm: 60,
  mu_e_nm: 550,
  sigma_e_nm: 40,
};

export function defaultState(): EditorState {
  return {
    materialId: null,
    revision: 0,
    gaussian: { ...DEFAULT_GAUSSIAN },
    albedo: [0.14, 0.14, 0.2],
    illuminantLeft: 'D65',
    illuminantRight: 'UV',
    paletteCell: null,
  };
}
