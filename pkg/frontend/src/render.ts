// View models for the chat transcript. Pure functions so tests can check the
// card-count invariant without a DOM.

import type { Envelope, ProductCard } from './api.js';

export type Role = 'user' | 'assistant';

export interface CardView {
  id: string;
  title: string;
  priceLabel: string;
  imageRef: string;
  url: string;
}

export interface BubbleView {
  role: Role;
  /** 'blue' for the user, 'grey' for the assistant. */
  tone: 'blue' | 'grey';
  text: string;
  cards: CardView[];
}

export function cardView(product: ProductCard): CardView {
  return {
    id: product.id,
    title: product.name,
    priceLabel: `$${product.price.toFixed(2)}`,
    imageRef: product.image_ref,
    url: product.url,
  };
}

export function userBubble(text: string): BubbleView {
  return { role: 'user', tone: 'blue', text, cards: [] };
}

/** One assistant bubble per envelope; never more cards than envelope products. */
export function assistantBubble(envelope: Envelope): BubbleView {
  const text = [envelope.intro, envelope.outro].filter((s) => s.length > 0).join('\n');
  return {
    role: 'assistant',
    tone: 'grey',
    text,
    cards: envelope.products.map(cardView),
  };
}
