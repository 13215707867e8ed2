import type { EditorState } from './types.js';
import { defaultState } from './types.js';

/**
 * Round-trippable URL query serialization so edit sessions can be
 * shared by copying the address bar.
 */
export function stateToQuery(state: EditorState): string {
  const q = new URLSearchParams();
  if (state.materialId) q.set('m', state.materialId);
  const g = state.gaussian;
  q.set('a', fmt(g.alpha_bar));
  q.set('ma', fmt(g.mu_a_nm));
  q.set('sa', fmt(g.sigma_a_nm));
  q.set('me', fmt(g.mu_e_nm));
  q.set('se', fmt(g.sigma_e_nm));
  q.set('al', state.albedo.map(fmt).join(','));
  q.set('il', state.illuminantLeft);
  q.set('ir', state.illuminantRight);
  if (state.paletteCell) q.set('cell', `${state.paletteCell.row},${state.paletteCell.col}`);
  return q.toString();
}

export function stateFromQuery(query: string): EditorState {
  const q = new URLSearchParams(query);
  const state = defaultState();
  state.materialId = q.get('m');
  const num = (key: string, fallback: number): number => {
    const raw = q.get(key);
    const v = raw === null ? NaN : Number(raw);
    return Number.isFinite(v) ? v : fallback;
  };
  state.gaussian = {
    alpha_bar: num('a', state.gaussian.alpha_bar),
    mu_a_nm: num('ma', state.gaussian.mu_a_nm),
    sigma_a_nm: num('sa', state.gaussian.sigma_a_nm),
    mu_e_nm: num('me', state.gaussian.mu_e_nm),
    sigma_e_nm: num('se', state.gaussian.sigma_e_nm),
  };
  const albedo = (q.get('al') ?? '').split(',').map(Number);
  if (albedo.length === 3 && albedo.every(Number.isFinite)) {
    state.albedo = albedo as [number, number, number];
  }
  state.illuminantLeft = q.get('il') ?? state.illuminantLeft;
  state.illuminantRight = q.get('ir') ?? state.illuminantRight;
  const cell = (q.get('cell') ?? '').split(',').map(Number);
  if (cell.length === 2 && cell.every((v) => Number.isInteger(v) && v >= 0)) {
    state.paletteCell = { row: cell[0], col: cell[1] };
  }
  return state;
}

function fmt(v: number): string {
  // trim float noise but keep enough digits for exact slider restore
  return String(Math.round(v * 1e6) / 1e6);
}
