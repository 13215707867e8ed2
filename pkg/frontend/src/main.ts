import { EditServiceClient, StaleRevisionError } from './api.js';
import { debounce } from './debounce.js';
import { cellParams, nearestCell, nudgeCell, pixelToCell } from './palette-grid.js';
import { decodePpm } from './ppm.js';
import { RevisionGate } from './revision.js';
import type { EditorState, PaletteParams } from './types.js';
import { stateFromQuery, stateToQuery } from './url-state.js';

const PALETTE_RES = 64;
const PREVIEW_SIZE = 256;

const client = new EditServiceClient('http://127.0.0.1:8765');
const state: EditorState = stateFromQuery(location.search);
const gate = new RevisionGate();
let palette: PaletteParams | null = null;

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const paletteCanvas = $<HTMLCanvasElement>('palette');
const previewCanvas = $<HTMLCanvasElement>('preview');
const status = $<HTMLSpanElement>('status');

const sliders = {
  alpha_bar: $<HTMLInputElement>('alpha'),
  mu_a_nm: $<HTMLInputElement>('mu-a'),
  sigma_a_nm: $<HTMLInputElement>('sigma-a'),
  mu_e_nm: $<HTMLInputElement>('mu-e'),
  sigma_e_nm: $<HTMLInputElement>('sigma-e'),
} as const;
const albedoInputs = [
  $<HTMLInputElement>('albedo-x'),
  $<HTMLInputElement>('albedo-y'),
  $<HTMLInputElement>('albedo-z'),
];
const illumLeft = $<HTMLSelectElement>('illum-left');
const illumRight = $<HTMLSelectElement>('illum-right');

function drawBytes(canvas: HTMLCanvasElement, bytes: Uint8Array): void {
  const img = decodePpm(bytes);
  const off = document.createElement('canvas');
  off.width = img.width;
  off.height = img.height;
  off.getContext('2d')!.putImageData(new ImageData(img.data, img.width, img.height), 0, 0);
  const ctx = canvas.getContext('2d')!;
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
}

function drawSelection(): void {
  if (!palette || !state.paletteCell) return;
  const ctx = paletteCanvas.getContext('2d')!;
  const cw = paletteCanvas.width / palette.mu_e_nm.length;
  const ch = paletteCanvas.height / palette.sigma_e_nm.length;
  ctx.strokeStyle = '#fff';
  ctx.lineWidth = 2;
  ctx.strokeRect(state.paletteCell.col * cw, state.paletteCell.row * ch, cw, ch);
}

function syncSliders(): void {
  for (const [key, input] of Object.entries(sliders)) {
    input.value = String(state.gaussian[key as keyof typeof sliders]);
  }
  albedoInputs.forEach((input, i) => (input.value = String(state.albedo[i])));
  illumLeft.value = state.illuminantLeft;
  illumRight.value = state.illuminantRight;
}

function syncUrl(): void {
  history.replaceState(null, '', `?${stateToQuery(state)}`);
}

async function refreshPalette(): Promise<void> {
  if (!state.materialId) return;
  const query = {
    muA: state.gaussian.mu_a_nm,
    sigmaA: state.gaussian.sigma_a_nm,
    illuminant: state.illuminantLeft,
    res: PALETTE_RES,
  };
  const [bytes, params] = await Promise.all([
    client.paletteImage(state.materialId, query),
    client.paletteParams(state.materialId, query),
  ]);
  palette = params;
  drawBytes(paletteCanvas, bytes);
  drawSelection();
}

async function refreshPreview(): Promise<void> {
  if (!state.materialId) return;
  const ticket = gate.issue();
  const revision = state.revision;
  const bytes = await client.previewImage(
    state.materialId,
    state.illuminantLeft,
    state.illuminantRight,
    PREVIEW_SIZE,
  );
  // stale responses (superseded by a later edit) are dropped
  if (!gate.accept(ticket, revision)) return;
  drawBytes(previewCanvas, bytes);
}

async function pushMaterial(): Promise<void> {
  if (!state.materialId) return;
  try {
    const res = await client.patchMaterial(state.materialId, state.revision, {
      albedo_xyz: state.albedo,
      gaussians: [state.gaussian],
    });
    state.revision = res.revision;
    status.textContent = `rev ${res.revision}`;
    await Promise.all([refreshPreview(), refreshPalette()]);
  } catch (err) {
    if (err instanceof StaleRevisionError) {
      // someone else won the write; re-sync and let the user retry
      const current = await client.getMaterial(state.materialId);
      state.revision = current.revision;
      state.gaussian = { ...current.material.gaussians[0] };
      syncSliders();
      status.textContent = `rebased to rev ${current.revision}`;
    } else {
      status.textContent = String(err);
    }
  }
}

const pushDebounced = debounce(() => void pushMaterial(), 100);

function onEdit(): void {
  syncUrl();
  pushDebounced();
}

function selectCell(row: number, col: number): void {
  if (!palette) return;
  const chosen = cellParams({ row, col }, palette);
  state.paletteCell = { row, col };
  state.gaussian.mu_e_nm = chosen.muE;
  state.gaussian.sigma_e_nm = chosen.sigmaE;
  syncSliders();
  drawSelection();
  onEdit();
}

paletteCanvas.addEventListener('click', (ev) => {
  if (!palette) return;
  const rect = paletteCanvas.getBoundingClientRect();
  const cell = pixelToCell(
    ev.clientX - rect.left,
    ev.clientY - rect.top,
    rect.width,
    rect.height,
    palette,
  );
  if (cell) selectCell(cell.row, cell.col);
});

paletteCanvas.addEventListener('keydown', (ev) => {
  if (!palette || !state.paletteCell) return;
  const next = nudgeCell(state.paletteCell, ev.key, palette);
  if (next !== state.paletteCell) {
    ev.preventDefault();
    selectCell(next.row, next.col);
  }
});

for (const [key, input] of Object.entries(sliders)) {
  input.addEventListener('input', () => {
    state.gaussian[key as keyof typeof sliders] = Number(input.value);
    if ((key === 'mu_e_nm' || key === 'sigma_e_nm') && palette) {
      state.paletteCell = nearestCell(
        state.gaussian.mu_e_nm,
        state.gaussian.sigma_e_nm,
        palette,
      );
    }
    onEdit();
  });
}

albedoInputs.forEach((input, i) => {
  input.addEventListener('input', () => {
    state.albedo[i] = Number(input.value);
    onEdit();
  });
});

function onIlluminantChange(): void {
  state.illuminantLeft = illumLeft.value;
  state.illuminantRight = illumRight.value;
  syncUrl();
  void Promise.all([refreshPreview(), refreshPalette()]);
}
illumLeft.addEventListener('change', onIlluminantChange);
illumRight.addEventListener('change', onIlluminantChange);

$<HTMLButtonElement>('swap').addEventListener('click', () => {
  [illumLeft.value, illumRight.value] = [illumRight.value, illumLeft.value];
  onIlluminantChange();
});

async function boot(): Promise<void> {
  const { illuminants } = await client.listIlluminants();
  for (const select of [illumLeft, illumRight]) {
    select.replaceChildren(
      ...illuminants.map((name) => new Option(name, name)),
    );
  }

  if (state.materialId) {
    try {
      const existing = await client.getMaterial(state.materialId);
      state.revision = existing.revision;
      state.gaussian = { ...existing.material.gaussians[0] };
      state.albedo = existing.material.albedo_xyz;
    } catch {
      state.materialId = null;
    }
  }
  if (!state.materialId) {
    const created = await client.createMaterial(state.albedo, [state.gaussian]);
    state.materialId = created.id;
    state.revision = created.revision;
  }

  syncSliders();
  syncUrl();
  await refreshPalette();
  if (palette && !state.paletteCell) {
    state.paletteCell = nearestCell(
      state.gaussian.mu_e_nm,
      state.gaussian.sigma_e_nm,
      palette,
    );
    drawSelection();
  }
  await refreshPreview();
  status.textContent = `rev ${state.revision}`;
}

void boot();
