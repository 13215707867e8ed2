import type { PaletteParams } from './types.js';

export interface Cell {
  row: number;
  col: number;
}

export interface CellParams {
  muE: number;
  sigmaE: number;
  resolvedAlpha: number;
}

/** Canvas pixel -> palette cell, for a palette image scaled to the canvas. */
export function pixelToCell(
  x: number,
  y: number,
  canvasWidth: number,
  canvasHeight: number,
  params: PaletteParams,
): Cell | null {
  const rows = params.sigma_e_nm.length;
  const cols = params.mu_e_nm.length;
  if (x < 0 || y < 0 || x >= canvasWidth || y >= canvasHeight) return null;
  const col = Math.floor((x / canvasWidth) * cols);
  const row = Math.floor((y / canvasHeight) * rows);
  return { row: Math.min(row, rows - 1), col: Math.min(col, cols - 1) };
}

/** What the server computed for a given cell; no client-side color math. */
export function cellParams(cell: Cell, params: PaletteParams): CellParams {
  const { row, col } = cell;
  if (row < 0 || row >= params.sigma_e_nm.length || col < 0 || col >= params.mu_e_nm.length) {
    throw new RangeError(`cell (${row}, ${col}) outside palette grid`);
  }
  return {
    muE: params.mu_e_nm[col],
    sigmaE: params.sigma_e_nm[row],
    resolvedAlpha: params.resolved_alpha[row][col],
  };
}

/** Nearest cell for (muE, sigmaE); used to restore a selection from the URL. */
export function nearestCell(muE: number, sigmaE: number, params: PaletteParams): Cell {
  const nearest = (values: number[], target: number) => {
    let best = 0;
    for (let i = 1; i < values.length; i++) {
      if (Math.abs(values[i] - target) < Math.abs(values[best] - target)) best = i;
    }
    return best;
  };
  return { row: nearest(params.sigma_e_nm, sigmaE), col: nearest(params.mu_e_nm, muE) };
}

/** Arrow-key nudging, clamped to the grid. */
export function nudgeCell(cell: Cell, key: string, params: PaletteParams): Cell {
  const rows = params.sigma_e_nm.length;
  const cols = params.mu_e_nm.length;
  let { row, col } = cell;
  switch (key) {
    case 'ArrowLeft':
      col -= 1;
      break;
    case 'ArrowRight':
      col += 1;
      break;
    case 'ArrowUp':
      row -= 1;
      break;
    case 'ArrowDown':
      row += 1;
      break;
    default:
      return cell;
  }
  return {
    row: Math.max(0, Math.min(rows - 1, row)),
    col: Math.max(0, Math.min(cols - 1, col)),
  };
}
