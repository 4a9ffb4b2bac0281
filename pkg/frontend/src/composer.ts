// Composer model: text input, image attachment and the mic button are
// mutually exclusive ways to send a message.

export type ComposerMode = 'empty' | 'typing' | 'image_attached';

export class Composer {
  private text = '';
  private imageFile: Blob | null = null;

  get mode(): ComposerMode {
    if (this.imageFile !== null) return 'image_attached';
    if (this.text.length > 0) return 'typing';
    return 'empty';
  }

  get sendEnabled(): boolean {
    return this.mode !== 'empty';
  }

  get currentText(): string {
    return this.text;
  }

  get attachedImage(): Blob | null {
    return this.imageFile;
  }

  /** Typing is ignored while an image is attached (text box disabled). */
  setText(value: string): void {
    if (this.imageFile !== null) return;
    this.text = value;
  }

  /** Attaching an image clears any draft text: the modes never overlap. */
  attachImage(file: Blob): void {
    this.text = '';
    this.imageFile = file;
  }

  /** The preview "X": back to an empty composer. */
  removeImage(): void {
    this.imageFile = null;
  }

  /** Mic is only available when nothing is typed or attached. */
  get micEnabled(): boolean {
    return this.mode === 'empty';
  }

  /** Returns what to send and resets to empty; null when sending is disabled. */
  take(): { kind: 'text'; text: string } | { kind: 'image'; image: Blob } | null {
    if (this.imageFile !== null) {
      const image = this.imageFile;
      this.imageFile = null;
      return { kind: 'image', image };
    }
    if (this.text.length > 0) {
      const text = this.text;
      this.text = '';
      return { kind: 'text', text };
    }
    return null;
  }
}
