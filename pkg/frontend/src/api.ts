import type { GaussianParams, MaterialResponse, PaletteParams } from './types.js';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class StaleRevisionError extends Error {}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export interface PaletteQuery {
  muA?: number;
  sigmaA?: number;
  illuminant?: string;
  res?: number;
}

/**
 * Thin typed client for the editing service. All color computation
 * happens server-side; this only moves JSON and image bytes.
 */
export class EditServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path, init);
    if (res.status === 409) throw new StaleRevisionError(await res.text());
    if (!res.ok) throw new ApiError(res.status, await res.text());
    return (await res.json()) as T;
  }

  private async bytes(path: string): Promise<Uint8Array> {
    const res = await this.fetchFn(this.baseUrl + path);
    if (!res.ok) throw new ApiError(res.status, await res.text());
    return new Uint8Array(await res.arrayBuffer());
  }

  listIlluminants(): Promise<{ illuminants: string[] }> {
    return this.json('/illuminants');
  }

  createMaterial(
    albedo: [number, number, number],
    gaussians: Partial<GaussianParams>[],
  ): Promise<MaterialResponse> {
    return this.json('/materials', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ albedo_xyz: albedo, gaussians }),
    });
  }

  getMaterial(id: string): Promise<MaterialResponse> {
    return this.json(`/materials/${encodeURIComponent(id)}`);
  }

  /**
   * Partial update guarded by the caller's revision; the server answers
   * 409 (surfaced as StaleRevisionError) when someone else wrote first.
   */
  patchMaterial(
    id: string,
    revision: number,
    patch: {
      albedo_xyz?: [number, number, number];
      gaussians?: (Partial<GaussianParams> | null)[];
      notes?: string;
    },
  ): Promise<MaterialResponse> {
    return this.json(`/materials/${encodeURIComponent(id)}`, {
      method: 'PATCH',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ revision, ...patch }),
    });
  }

  paletteImage(id: string, q: PaletteQuery = {}): Promise<Uint8Array> {
    return this.bytes(`/palette?${this.paletteQuery(id, q)}`);
  }

  paletteParams(id: string, q: PaletteQuery = {}): Promise<PaletteParams> {
    return this.json(`/palette/params?${this.paletteQuery(id, q)}`);
  }

  previewImage(
    id: string,
    illuminant: string,
    illuminant2?: string,
    size = 256,
  ): Promise<Uint8Array> {
    const q = new URLSearchParams({ material: id, illuminant, size: String(size) });
    if (illuminant2) q.set('illuminant2', illuminant2);
    return this.bytes(`/preview?${q.toString()}`);
  }

  private paletteQuery(id: string, q: PaletteQuery): string {
    const params = new URLSearchParams({ material: id });
    if (q.muA !== undefined) params.set('mu_a', String(q.muA));
    if (q.sigmaA !== undefined) params.set('sigma_a', String(q.sigmaA));
    if (q.illuminant) params.set('illuminant', q.illuminant);
    if (q.res !== undefined) params.set('res', String(q.res));
    return params.toString();
  }
}
