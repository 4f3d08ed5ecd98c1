import type { Config } from "./types";

function clone(config: Config): Config {
  return JSON.parse(JSON.stringify(config)) as Config;
}

function fieldEqual(a: unknown, b: unknown): boolean {
  return JSON.stringify(a) === JSON.stringify(b);
}

/**
 * Draft state of the config form. The draft diverging from the last server
 * snapshot marks fields dirty; a dirty form must not be discarded silently
 * (see guardNavigation).
 */
export class ConfigFormState {
  private snapshot: Config;
  draft: Config;

  constructor(config: Config) {
    this.snapshot = clone(config);
    this.draft = clone(config);
  }

  set<K extends keyof Config>(field: K, value: Config[K]): void {
    this.draft[field] = value;
  }

  dirtyFields(): (keyof Config)[] {
    const fields = Object.keys(this.snapshot) as (keyof Config)[];
    return fields.filter((f) => !fieldEqual(this.snapshot[f], this.draft[f]));
  }

  isDirty(): boolean {
    return this.dirtyFields().length > 0;
  }

  /** Server accepted the save: the new config becomes the clean snapshot. */
  markSaved(config: Config): void {
    this.snapshot = clone(config);
    this.draft = clone(config);
  }

  /** Throw away local edits. */
  revert(): void {
    this.draft = clone(this.snapshot);
  }
}

/**
 * Navigation guard: returns true when leaving the view is allowed. A dirty
 * form prompts through `confirmFn` (window.confirm in the app, injectable in
 * tests).
 */
export function guardNavigation(
  state: ConfigFormState | null,
  confirmFn: (message: string) => boolean,
): boolean {
  if (!state || !state.isDirty()) {
    return true;
  }
  return confirmFn("The configuration has unsaved changes. Discard them?");
}
