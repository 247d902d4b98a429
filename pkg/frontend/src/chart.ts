/**
 * Probe chart data: one sample per tick per series, displayed as a
 * sliding window of the latest ticks with the full history retained for
 * zoom-out.
 */

export const DEFAULT_WINDOW = 500;

export interface Sample {
  tick: number;
  value: number;
}

export class ProbeChart {
  readonly window: number;
  private readonly series = new Map<string, Sample[]>();

  constructor(window: number = DEFAULT_WINDOW) {
    this.window = window;
  }

  seriesNames(): string[] {
    return [...this.series.keys()];
  }

  /**
   * Append one tick's samples. A rewind shows up as a non-monotonic tick;
   * samples at or past it are dropped so the chart tracks the new branch.
   */
  append(tick: number, probes: Record<string, number>): void {
    for (const [name, value] of Object.entries(probes)) {
      let samples = this.series.get(name);
      if (!samples) {
        samples = [];
        this.series.set(name, samples);
      }
      while (samples.length > 0 && samples[samples.length - 1].tick >= tick) {
        samples.pop();
      }
      samples.push({ tick, value });
    }
  }

  history(name: string): Sample[] {
    return [...(this.series.get(name) ?? [])];
  }

  /** The latest `window` samples — what the default chart view draws. */
  windowed(name: string): Sample[] {
    const samples = this.series.get(name) ?? [];
    return samples.slice(Math.max(0, samples.length - this.window));
  }

  clear(): void {
    this.series.clear();
  }
}
